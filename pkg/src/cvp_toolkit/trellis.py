"""Layer-boundary detection on 2-D cost maps via reciprocal pointer chains.

Every pixel becomes a trellis node; column ``i`` connects to column ``i+1``
within a vertical window. An edge into pixel ``(i+1, r')`` from ``(i, r)``
costs

    evidence_weight * (1 - e(i+1, r')) + (r' - r)**2 / (2 * sigma**2)

with ``e`` the min-max normalised map, i.e. a negative log of evidence times
a Gaussian orientation prior. Virtual source/target nodes feed column 0 and
drain the last column at zero cost. Boundaries are the chains (not the
full via-paths) whose per-edge cost passes a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .graph import Graph
from .partition import partition_rpc
from .spt import DEFAULT_TIES, cvp_trees


@dataclass(frozen=True, eq=False)
class CostMap:
    """``values[row, col]``: rows are time samples, columns are channels."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("cost map must be 2-D")
        if v.shape[0] < 1 or v.shape[1] < 2:
            raise ValueError("cost map needs at least 1 row and 2 columns")
        if not np.all(np.isfinite(v)):
            raise ValueError("cost map contains non-finite values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def normalized(self) -> np.ndarray:
        lo, hi = self.values.min(), self.values.max()
        if hi == lo:
            return np.zeros_like(self.values)
        return (self.values - lo) / (hi - lo)


@dataclass(frozen=True)
class TrellisParams:
    window: int = 2
    sigma: float = 1.0
    evidence_weight: float = 1.0
    threshold: float = 0.25
    min_chain_len: int = 3
    threshold_mode: str = "mean"

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.evidence_weight < 0:
            raise ValueError("evidence_weight must be >= 0")
        if self.min_chain_len < 2:
            raise ValueError("min_chain_len must be >= 2")
        if self.threshold_mode not in ("mean", "total"):
            raise ValueError("threshold_mode must be 'mean' or 'total'")


@dataclass(frozen=True)
class Boundary:
    points: tuple
    mean_edge_cost: float
    total_cost: float = 0.0

    def rows_by_col(self) -> dict[int, int]:
        return {c: r for c, r in self.points}

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points], "mean_edge_cost": self.mean_edge_cost}


@dataclass(frozen=True, eq=False)
class Trellis:
    graph: Graph
    rows: int
    cols: int
    source: int
    target: int

    def node(self, col: int, row: int) -> int:
        return col * self.rows + row

    def pixel(self, node: int) -> tuple[int, int]:
        """``(col, row)`` of a pixel node."""
        return divmod(node, self.rows)

    def is_virtual(self, node: int) -> bool:
        return node >= self.rows * self.cols


def build_trellis(costmap: CostMap, params: TrellisParams = TrellisParams()) -> Trellis:
    rows, cols = costmap.rows, costmap.cols
    evidence = costmap.normalized()
    n_pix = rows * cols
    s, t = n_pix, n_pix + 1
    src, dst, cost = [], [], []
    r = np.arange(rows)
    two_var = 2.0 * params.sigma ** 2
    for i in range(cols - 1):
        for step in range(-params.window, params.window + 1):
            r0 = r[(r + step >= 0) & (r + step < rows)]
            r1 = r0 + step
            src.append(i * rows + r0)
            dst.append((i + 1) * rows + r1)
            cost.append(params.evidence_weight * (1.0 - evidence[r1, i + 1]) + step * step / two_var)
    src.append(np.full(rows, s))
    dst.append(r.copy())
    cost.append(np.zeros(rows))
    src.append((cols - 1) * rows + r)
    dst.append(np.full(rows, t))
    cost.append(np.zeros(rows))
    graph = Graph(n_pix + 2, np.concatenate(src), np.concatenate(dst), np.concatenate(cost))
    return Trellis(graph, rows, cols, s, t)


def trellis_chains(trellis: Trellis, ties=DEFAULT_TIES):
    trees = cvp_trees(trellis.graph, trellis.source, trellis.target, ties)
    return trees, partition_rpc(trees[0], trees[1], trellis.source, trellis.target)


def detect_layers(costmap: CostMap, params: TrellisParams = TrellisParams(), ties=DEFAULT_TIES) -> list[Boundary]:
    """Chains of at least ``min_chain_len`` pixels whose mean (or total) edge
    cost is within ``params.threshold``, cheapest mean first."""
    trellis = build_trellis(costmap, params)
    trees, partition = trellis_chains(trellis, ties)
    dist_s = trees[0].dist
    found = []
    for chain in partition.chains:
        pixels = [v for v in chain if not trellis.is_virtual(v)]
        if len(pixels) < params.min_chain_len:
            continue
        total = dist_s[pixels[-1]] - dist_s[pixels[0]]
        if not math.isfinite(total):
            continue
        mean = total / (len(pixels) - 1)
        score = mean if params.threshold_mode == "mean" else total
        if score > params.threshold:
            continue
        found.append(Boundary(tuple(trellis.pixel(v) for v in pixels), mean, total))
    found.sort(key=lambda b: (b.mean_edge_cost, b.points))
    return found


def boundary_mask(costmap: CostMap, boundaries: Sequence[Boundary]) -> np.ndarray:
    """Integer image with ``i + 1`` on the pixels of boundary ``i``, 0 elsewhere."""
    mask = np.zeros((costmap.rows, costmap.cols), dtype=np.int32)
    for i, b in enumerate(boundaries):
        for c, r in b.points:
            mask[r, c] = i + 1
    return mask


def check_non_crossing(boundaries: Sequence[Boundary]) -> bool:
    """True when, over every shared column range, one boundary stays strictly
    above the other."""
    for a_i in range(len(boundaries)):
        a = boundaries[a_i].rows_by_col()
        for b_i in range(a_i + 1, len(boundaries)):
            b = boundaries[b_i].rows_by_col()
            signs = {np.sign(a[c] - b[c]) for c in a.keys() & b.keys()}
            if 0 in signs or len(signs) > 1:
                return False
    return True


def planted_bands(rows: int, cols: int, band_rows: Sequence[int], amplitude: float = 1.0,
                  background: float = 0.0, noise: float = 0.0,
                  rng: Optional[np.random.Generator] = None) -> CostMap:
    """Synthetic map with bright horizontal bands at ``band_rows``."""
    values = np.full((rows, cols), background, dtype=np.float64)
    for r in band_rows:
        values[r, :] = amplitude
    if noise:
        rng = rng if rng is not None else np.random.default_rng(0)
        values = values + rng.normal(0.0, noise, size=values.shape)
    return CostMap(values)


def read_costmap(path) -> CostMap:
    """CSV (one row per time sample) or PGM grayscale."""
    p = Path(path)
    if p.suffix.lower() in (".pgm", ".pnm"):
        from PIL import Image

        with Image.open(p) as img:
            return CostMap(np.asarray(img, dtype=np.float64))
    return CostMap(np.loadtxt(p, delimiter=",", ndmin=2))


def to_svg(costmap: CostMap, boundaries: Sequence[Boundary], scale: int = 8) -> str:
    """Grayscale rendering of the map with boundaries drawn as polylines."""
    e = costmap.normalized()
    w, h = costmap.cols * scale, costmap.rows * scale
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    for r in range(costmap.rows):
        for c in range(costmap.cols):
            g = int(round(255 * e[r, c]))
            out.append(f'<rect x="{c * scale}" y="{r * scale}" width="{scale}" height="{scale}" fill="rgb({g},{g},{g})"/>')
    half = scale / 2
    for b in boundaries:
        pts = " ".join(f"{c * scale + half:g},{r * scale + half:g}" for c, r in b.points)
        out.append(f'<polyline points="{pts}" fill="none" stroke="orange" stroke-width="{max(1, scale // 4)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
