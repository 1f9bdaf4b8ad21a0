"""k shortest loopless paths: Yen's algorithm and the chain-based graph reduction.

Any path cheaper than a given via-path only visits nodes whose own
via-path is cheaper still, and those nodes all sit on the chains of the
cheaper records. So Yen can run on the subgraph induced by the chains of
the ``j`` cheapest records, provided the k-th path it finds is strictly
cheaper than record ``j + 1``; otherwise ``j`` is doubled and we retry.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import Graph, GraphError
from .partition import Partition
from .pipeline import compute_cvps
from .ranking import CvpRecord, ExplicitPath
from .spt import DEFAULT_TIES, shortest_path


def yen_ksp(graph: Graph, s: int, t: int, k: int) -> list[ExplicitPath]:
    """Up to ``k`` cheapest simple ``s``-``t`` paths, cheapest first.

    Spur searches reuse the Dijkstra core with banned nodes/arcs passed as a
    filter; the graph is never copied or mutated. Candidates tie-break on the
    node sequence, so output is deterministic.
    """
    if k < 1:
        raise ValueError("k must be positive")
    for v in (s, t):
        if not 0 <= v < graph.node_count:
            raise GraphError(f"{v} is not a node")
    first = shortest_path(graph, s, t)
    if first is None:
        return []
    found = [tuple(first)]
    seen = {found[0]}
    candidates: list[tuple[float, tuple]] = []
    while len(found) < k:
        prev = found[-1]
        for i in range(len(prev) - 1):
            spur = prev[i]
            root = prev[: i + 1]
            banned_arcs = {(p[i], p[i + 1]) for p in found if len(p) > i + 1 and p[: i + 1] == root}
            spur_path = shortest_path(graph, spur, t, banned_nodes=root[:-1], banned_arcs=banned_arcs)
            if spur_path is not None:
                total = root[:-1] + tuple(spur_path)
                if total not in seen:
                    seen.add(total)
                    heapq.heappush(candidates, (graph.path_cost(total), total))
        if not candidates:
            break
        _, best = heapq.heappop(candidates)
        found.append(best)
    return [ExplicitPath(p, graph.path_cost(p)) for p in found]


@dataclass(frozen=True, eq=False)
class ReducedGraph:
    """Subgraph induced by the chains of the ``j`` cheapest records plus ``s`` and ``t``.

    ``nodes[i]`` is the original id of reduced node ``i``.
    """

    graph: Graph
    nodes: list
    j: int
    index: dict = field(repr=False)

    def to_original(self, path: Sequence[int]) -> tuple:
        return tuple(self.nodes[v] for v in path)

    def to_reduced(self, v: int) -> int:
        return self.index[v]


def build_reduced_graph(graph: Graph, records: Sequence[CvpRecord], partition: Partition, j: int,
                        s: int, t: int) -> ReducedGraph:
    """``records`` must be sorted cheapest first; uses the first ``j`` of them."""
    if not 1 <= j <= len(records):
        raise ValueError(f"j must lie in [1, {len(records)}]")
    keep = {s, t}
    for r in records[:j]:
        keep.update(partition.chains[r.chain_index])
    sub, nodes = graph.subgraph(keep)
    return ReducedGraph(sub, nodes, j, {v: i for i, v in enumerate(nodes)})


@dataclass
class KspRun:
    paths: list
    reduced: Optional[ReducedGraph] = None
    reduce_ms: float = 0.0
    yen_ms: float = 0.0
    rounds: int = 0


def accelerated_ksp_run(graph: Graph, s: int, t: int, k: int, ties=DEFAULT_TIES) -> KspRun:
    """:func:`accelerated_ksp` plus timings and the final reduced graph."""
    if k < 1:
        raise ValueError("k must be positive")
    t0 = time.perf_counter()
    result = compute_cvps(graph, s, t, ties)
    ordered = result.best("cost")
    reduce_ms = (time.perf_counter() - t0) * 1e3
    if not ordered or not ordered[0].reachable:
        return KspRun([], None, reduce_ms, 0.0, 0)
    yen_ms = 0.0
    j = min(k, len(ordered))
    rounds = 0
    while True:
        rounds += 1
        t0 = time.perf_counter()
        reduced = build_reduced_graph(graph, ordered, result.partition, j, s, t)
        reduce_ms += (time.perf_counter() - t0) * 1e3
        t0 = time.perf_counter()
        sub_paths = yen_ksp(reduced.graph, reduced.to_reduced(s), reduced.to_reduced(t), k)
        yen_ms += (time.perf_counter() - t0) * 1e3
        if j == len(ordered):
            break
        if len(sub_paths) == k and sub_paths[-1].cost < ordered[j].cost:
            break
        j = min(2 * j, len(ordered))
    paths = [ExplicitPath(reduced.to_original(p.nodes), p.cost) for p in sub_paths]
    return KspRun(paths, reduced, reduce_ms, yen_ms, rounds)


def accelerated_ksp(graph: Graph, s: int, t: int, k: int, ties=DEFAULT_TIES) -> list[ExplicitPath]:
    """Same cost sequence as :func:`yen_ksp`, computed on a reduced subgraph."""
    return accelerated_ksp_run(graph, s, t, k, ties).paths
