"""Directed weighted graphs, DIMACS/JSON ingestion and travel-time weights."""

from __future__ import annotations

import gzip
import io
import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class GraphError(ValueError):
    pass


class DimacsError(GraphError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph over dense node ids ``0 .. node_count - 1``.

    Edges are kept as parallel arrays; compressed adjacency (forward and
    reverse) is built lazily and cached as plain Python lists, which is what
    the hot loops in :mod:`cvp_toolkit.spt` iterate over.
    Parallel edges and self-loops are allowed.
    """

    node_count: int
    sources: np.ndarray
    targets: np.ndarray
    costs: np.ndarray
    categories: Optional[np.ndarray] = None

    def __post_init__(self):
        n = int(self.node_count)
        if n < 0:
            raise GraphError("node_count must be non-negative")
        src = np.asarray(self.sources, dtype=np.int64).reshape(-1)
        dst = np.asarray(self.targets, dtype=np.int64).reshape(-1)
        cost = np.asarray(self.costs, dtype=np.float64).reshape(-1)
        if not (len(src) == len(dst) == len(cost)):
            raise GraphError("edge arrays must have equal length")
        if len(src):
            lo = min(src.min(), dst.min())
            hi = max(src.max(), dst.max())
            if lo < 0 or hi >= n:
                raise GraphError("node id out of range")
            if not np.all(np.isfinite(cost)):
                raise GraphError("edge costs must be finite")
            if cost.min() < 0:
                raise GraphError("edge costs must be non-negative")
        cat = None
        if self.categories is not None:
            cat = np.asarray(self.categories, dtype=np.int64).reshape(-1)
            if len(cat) != len(src):
                raise GraphError("categories must have one entry per edge")
        for name, arr in (("sources", src), ("targets", dst), ("costs", cost), ("categories", cat)):
            if arr is not None:
                arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "node_count", n)

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence], categories: Optional[Sequence[int]] = None) -> "Graph":
        """Build from ``(u, v, cost)`` triples (or ``(u, v, cost, category)``)."""
        edges = list(edges)
        if edges and categories is None and all(len(e) == 4 for e in edges):
            categories = [e[3] for e in edges]
        src = [e[0] for e in edges]
        dst = [e[1] for e in edges]
        cost = [e[2] for e in edges]
        return cls(node_count, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64),
                   np.array(cost, dtype=np.float64),
                   None if categories is None else np.array(categories, dtype=np.int64))

    @property
    def edge_count(self) -> int:
        return len(self.sources)

    @property
    def segment_count(self) -> int:
        """Number of distinct unordered node pairs joined by at least one arc."""
        if not self.edge_count:
            return 0
        lo = np.minimum(self.sources, self.targets)
        hi = np.maximum(self.sources, self.targets)
        return len(np.unique(lo * max(self.node_count, 1) + hi))

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.costs.tolist()))

    def _csr(self, keys: np.ndarray, other: np.ndarray):
        order = np.argsort(keys, kind="stable")
        counts = np.bincount(keys, minlength=self.node_count)
        offsets = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return offsets.tolist(), other[order].tolist(), self.costs[order].tolist()

    @cached_property
    def out_adjacency(self) -> tuple[list[int], list[int], list[float]]:
        """``(offsets, heads, costs)``; out-edges of ``u`` sit at ``offsets[u]:offsets[u+1]``."""
        return self._csr(self.sources, self.targets)

    @cached_property
    def in_adjacency(self) -> tuple[list[int], list[int], list[float]]:
        """``(offsets, tails, costs)`` for in-edges, same layout as :attr:`out_adjacency`."""
        return self._csr(self.targets, self.sources)

    def successors(self, u: int) -> list[tuple[int, float]]:
        off, heads, costs = self.out_adjacency
        return list(zip(heads[off[u]:off[u + 1]], costs[off[u]:off[u + 1]]))

    def predecessors(self, v: int) -> list[tuple[int, float]]:
        off, tails, costs = self.in_adjacency
        return list(zip(tails[off[v]:off[v + 1]], costs[off[v]:off[v + 1]]))

    @cached_property
    def arc_costs(self) -> dict[tuple[int, int], float]:
        """Cheapest cost per ordered node pair (parallel arcs collapse to the minimum)."""
        best: dict[tuple[int, int], float] = {}
        for u, v, c in zip(self.sources.tolist(), self.targets.tolist(), self.costs.tolist()):
            prev = best.get((u, v))
            if prev is None or c < prev:
                best[(u, v)] = c
        return best

    def path_cost(self, nodes: Sequence[int]) -> float:
        """Sum of the cheapest arc between each consecutive pair of ``nodes``."""
        arcs = self.arc_costs
        total = 0.0
        for u, v in zip(nodes, nodes[1:]):
            try:
                total += arcs[(u, v)]
            except KeyError:
                raise GraphError(f"no edge {u}->{v}") from None
        return total

    def subgraph(self, nodes: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``nodes``; returns it with the new-id -> old-id list."""
        keep = sorted(set(int(v) for v in nodes))
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        mask = (remap[self.sources] >= 0) & (remap[self.targets] >= 0)
        cats = None if self.categories is None else self.categories[mask]
        sub = Graph(len(keep), remap[self.sources[mask]], remap[self.targets[mask]], self.costs[mask], cats)
        return sub, keep

    def same_structure(self, other: "Graph") -> bool:
        """Equality of node count and of the (sorted) edge multiset."""
        if self.node_count != other.node_count or self.edge_count != other.edge_count:
            return False
        return sorted(self._edge_tuples()) == sorted(other._edge_tuples())

    def _edge_tuples(self):
        cats = self.categories.tolist() if self.categories is not None else [None] * self.edge_count
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.costs.tolist(), cats))

    def to_json(self) -> dict:
        edges = [[u, v, _num(c)] for u, v, c in self.edges()]
        out = {"nodes": self.node_count, "edges": edges}
        if self.categories is not None:
            out["categories"] = self.categories.tolist()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        try:
            n = int(data["nodes"])
            edges = [(int(e[0]), int(e[1]), float(e[2])) for e in data["edges"]]
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None
        return cls.from_edges(n, edges, data.get("categories"))


def _num(x: float):
    return int(x) if float(x).is_integer() else float(x)


def transpose(graph: Graph) -> Graph:
    """Reverse every edge; costs and categories travel with their edge."""
    return Graph(graph.node_count, graph.targets, graph.sources, graph.costs, graph.categories)


@dataclass(frozen=True, eq=False)
class NodeGeometry:
    """Per-node coordinates: ``(lon, lat)`` in degrees or ``(row, col)`` grid positions."""

    xy: np.ndarray
    kind: str = "lonlat"

    def __post_init__(self):
        xy = np.asarray(self.xy, dtype=np.float64)
        if xy.ndim != 2 or xy.shape[1] != 2:
            raise GraphError("geometry must be an (n, 2) array")
        xy.setflags(write=False)
        object.__setattr__(self, "xy", xy)

    def __len__(self):
        return len(self.xy)

    def coords(self, nodes: Iterable[int]) -> list[list[float]]:
        return self.xy[list(nodes)].tolist()


def _open_text(source) -> io.TextIOBase:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
        if data[:2] == b"\x1f\x8b":
            data = gzip.decompress(data)
        return io.StringIO(data.decode("ascii", errors="replace"))
    if isinstance(source, str) and "\n" in source:
        return io.StringIO(source)
    if hasattr(source, "read"):
        data = source.read()
        return io.StringIO(data) if isinstance(data, str) else _open_text(bytes(data))
    path = Path(source)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="ascii", errors="replace")
    return open(path, "r", encoding="ascii", errors="replace")


def parse_dimacs(gr_text, co_text=None) -> tuple[Graph, Optional[NodeGeometry]]:
    """Parse a 9th-DIMACS-challenge ``.gr`` (and optional ``.co``) file.

    Inputs may be paths, raw bytes (optionally gzipped), file objects or the
    text itself. Node ids are shifted from 1-based to 0-based. An optional
    fifth token on ``a`` lines is read as an integer road category.
    """
    with _open_text(gr_text) as fh:
        n = None
        declared_m = 0
        src: list[int] = []
        dst: list[int] = []
        cost: list[float] = []
        cats: list[int] = []
        for line_no, line in enumerate(fh, 1):
            if not line or line[0] in "c\n\r":
                continue
            parts = line.split()
            if not parts:
                continue
            tag = parts[0]
            if tag == "p":
                if len(parts) != 4 or parts[1] != "sp":
                    raise DimacsError("malformed header, expected 'p sp <n> <m>'", line_no)
                try:
                    n, declared_m = int(parts[2]), int(parts[3])
                except ValueError:
                    raise DimacsError("malformed header, non-integer counts", line_no) from None
                if n < 0 or declared_m < 0:
                    raise DimacsError("malformed header, negative counts", line_no)
            elif tag == "a":
                if n is None:
                    raise DimacsError("arc before 'p sp' header", line_no)
                if len(parts) not in (4, 5):
                    raise DimacsError("malformed arc line", line_no)
                try:
                    u, v = int(parts[1]), int(parts[2])
                    w = float(parts[3])
                except ValueError:
                    raise DimacsError("malformed arc line", line_no) from None
                if not (1 <= u <= n and 1 <= v <= n):
                    raise DimacsError("node id out of range", line_no)
                if not math.isfinite(w) or w < 0:
                    raise DimacsError(f"negative or non-finite weight {parts[3]}", line_no)
                src.append(u - 1)
                dst.append(v - 1)
                cost.append(w)
                if len(parts) == 5:
                    cats.append(int(parts[4]))
            else:
                raise DimacsError(f"unknown line type {tag!r}", line_no)
    if n is None:
        raise DimacsError("missing 'p sp' header")
    if cats and len(cats) != len(src):
        raise DimacsError("road category given on some arcs but not all")
    if len(src) != declared_m:
        logger.warning("header declares %d arcs, file contains %d", declared_m, len(src))
    graph = Graph(n, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64),
                  np.array(cost, dtype=np.float64), np.array(cats, dtype=np.int64) if cats else None)
    geometry = None if co_text is None else parse_coordinates(co_text, n)
    return graph, geometry


def parse_coordinates(co_text, node_count: int) -> NodeGeometry:
    """Parse ``v <id> <lon> <lat>`` lines (integer micro-degrees) into degrees."""
    xy = np.full((node_count, 2), np.nan)
    with _open_text(co_text) as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0] in ("c", "p"):
                continue
            if parts[0] != "v" or len(parts) != 4:
                raise DimacsError("malformed coordinate line", line_no)
            try:
                i, lon, lat = int(parts[1]), float(parts[2]), float(parts[3])
            except ValueError:
                raise DimacsError("malformed coordinate line", line_no) from None
            if not 1 <= i <= node_count:
                raise DimacsError("node id out of range", line_no)
            xy[i - 1] = (lon / 1e6, lat / 1e6)
    if np.isnan(xy).any():
        raise GraphError("coordinates missing for some nodes")
    return NodeGeometry(xy)


def write_dimacs(graph: Graph) -> str:
    """Serialize to ``.gr`` text (1-based ids; categories as a fifth column)."""
    lines = [f"p sp {graph.node_count} {graph.edge_count}"]
    cats = graph.categories.tolist() if graph.categories is not None else None
    for i, (u, v, c) in enumerate(graph.edges()):
        row = f"a {u + 1} {v + 1} {_num(c)!r}"
        if cats is not None:
            row += f" {cats[i]}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def load_graph(path, coords=None) -> tuple[Graph, Optional[NodeGeometry]]:
    """Load a ``.json`` graph dump or a DIMACS ``.gr[.gz]`` file."""
    p = Path(path)
    if p.suffix == ".json":
        graph = Graph.from_json(json.loads(p.read_text()))
        geometry = None
        if coords is not None:
            geometry = parse_coordinates(coords, graph.node_count)
        return graph, geometry
    return parse_dimacs(p, coords)


@dataclass(frozen=True)
class SpeedTable:
    """Speed in miles per hour for each road category code."""

    speeds: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for code, mph in self.speeds.items():
            if not mph > 0:
                raise GraphError(f"speed for category {code} must be positive")

    @classmethod
    def from_ranges(cls, ranges: Iterable[tuple[Iterable[int], float]]) -> "SpeedTable":
        speeds: dict[int, float] = {}
        for codes, mph in ranges:
            for code in codes:
                if code in speeds:
                    raise GraphError(f"category {code} listed twice")
                speeds[int(code)] = float(mph)
        return cls(speeds)

    def speed(self, category: int) -> float:
        try:
            return self.speeds[int(category)]
        except KeyError:
            raise GraphError(f"no speed for road category {category}") from None


ROAD_SPEED_TABLE = SpeedTable.from_ranges([
    (range(11, 16), 70.0),
    ([25], 60.0),
    (range(21, 25), 55.0),
    ([31, 32, 33, 34, 35, 38], 37.5),
    (range(41, 49), 22.5),
])


def apply_speed_model(graph: Graph, table: SpeedTable = ROAD_SPEED_TABLE, miles_per_unit: float = 1.0) -> Graph:
    """Turn distance weights into travel times in hours.

    ``miles_per_unit`` converts the dataset's distance unit to miles.
    Every edge must carry a category known to ``table``.
    """
    if graph.categories is None:
        raise GraphError("graph has no road categories")
    codes = np.unique(graph.categories)
    lookup = {int(c): table.speed(int(c)) for c in codes}
    mph = np.array([lookup[c] for c in graph.categories.tolist()], dtype=np.float64)
    hours = graph.costs * miles_per_unit / mph
    return Graph(graph.node_count, graph.sources, graph.targets, hours, graph.categories)
