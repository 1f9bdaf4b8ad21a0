"""Jaccard path distance, set diversity, and the via-node-fraction bounds."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .graph import Graph
from .oracle import EnumerationBudget, enumerate_simple_paths
from .ranking import CvpRecord, ExplicitPath

PathLike = Union[ExplicitPath, Sequence[int]]


def _nodes(p: PathLike) -> frozenset:
    nodes = p.nodes if isinstance(p, ExplicitPath) else p
    if len(nodes) == 0:
        raise ValueError("empty path")
    return frozenset(nodes)


def jaccard_distance(p: PathLike, q: PathLike) -> float:
    """``1 - |P & Q| / |P | Q|`` over the paths' node sets (repeats collapse)."""
    a, b = _nodes(p), _nodes(q)
    return 1.0 - len(a & b) / len(a | b)


@dataclass(frozen=True, eq=False)
class PathSet:
    paths: tuple
    node_sets: tuple

    @classmethod
    def of(cls, paths: Iterable[PathLike]) -> "PathSet":
        paths = tuple(paths)
        return cls(paths, tuple(_nodes(p) for p in paths))

    def __len__(self):
        return len(self.paths)

    def distance_matrix(self) -> list[list[float]]:
        n = len(self.paths)
        out = [[0.0] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            a, b = self.node_sets[i], self.node_sets[j]
            out[i][j] = out[j][i] = 1.0 - len(a & b) / len(a | b)
        return out


def diversity(paths: Union[PathSet, Iterable[PathLike]]) -> float:
    """Mean pairwise Jaccard distance."""
    ps = paths if isinstance(paths, PathSet) else PathSet.of(paths)
    n = len(ps)
    if n < 2:
        raise ValueError("diversity needs at least two paths")
    total = 0.0
    for a, b in combinations(ps.node_sets, 2):
        total += 1.0 - len(a & b) / len(a | b)
    return 2.0 * total / (n * (n - 1))


def neighborhood(p: ExplicitPath, graph: Graph, s: int, t: int, hop_cap: Optional[int] = None,
                 budget: Optional[EnumerationBudget] = None) -> tuple[float, Optional[ExplicitPath]]:
    """Distance from ``p`` to the nearest strictly cheaper simple ``s``-``t`` path.

    Returns ``(1.0, None)`` when nothing is cheaper. Exhaustive; only for
    graphs within the enumeration budget.
    """
    if budget is None:
        budget = EnumerationBudget(max_hops=hop_cap)
    elif hop_cap is not None:
        budget = EnumerationBudget(budget.max_nodes, hop_cap, budget.max_paths)
    best, witness = 1.0, None
    for q in enumerate_simple_paths(graph, s, t, budget):
        if q.cost < p.cost:
            d = jaccard_distance(p, q)
            if witness is None or d < best or (d == best and q.nodes < witness.nodes):
                best, witness = d, q
    return best, witness


def diversity_lower_bound(records: Sequence[Union[CvpRecord, float]]) -> float:
    """Lower bound on the diversity of via-paths listed in descending via-node fraction.

    ``(2 / (n (n - 1))) * sum_{j >= 2} (j - 1) * omega_j`` with 1-based ``j``.
    """
    omegas = [r.omega if isinstance(r, CvpRecord) else float(r) for r in records]
    n = len(omegas)
    if n < 2:
        raise ValueError("need at least two records")
    if any(a < b for a, b in zip(omegas, omegas[1:])):
        raise ValueError("records must be sorted by descending omega")
    total = sum(j * w for j, w in enumerate(omegas))
    return 2.0 * total / (n * (n - 1))
