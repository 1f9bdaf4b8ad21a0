"""Scoring, ranking, threshold selection and extraction of cascading via-paths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import Graph, GraphError
from .partition import Partition
from .spt import INF, ShortestPathTree

MEASURES = ("cost", "omega", "rho")


@dataclass(frozen=True)
class CvpRecord:
    """Constant-time summary of one chain and the via-path it stands for.

    ``omega`` is the share of the via-path's nodes that lie on the chain,
    ``rho`` the share of its cost. Records for nodes cut off from the
    source or the target have infinite ``cost`` and ``omega = rho = 0``.
    """

    chain_index: int
    head: int
    tail: int
    cost: float
    cvp_hops: int
    chain_hops: int
    omega: float
    rho: float

    @property
    def reachable(self) -> bool:
        return self.cost < INF


@dataclass(frozen=True)
class ExplicitPath:
    nodes: tuple
    cost: float

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def __len__(self):
        return len(self.nodes)

    @property
    def node_set(self) -> frozenset:
        return frozenset(self.nodes)

    def is_simple(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)


def score_chains(partition: Partition, trees: tuple[ShortestPathTree, ShortestPathTree]) -> list[CvpRecord]:
    g_beta, g_phi = trees
    ds, dt, hs, ht = g_beta.dist, g_phi.dist, g_beta.hops, g_phi.hops
    records = []
    for i, chain in enumerate(partition.chains):
        h, l = chain[0], chain[-1]
        cost = ds[h] + dt[h]
        chain_hops = len(chain) - 1
        if cost == INF:
            records.append(CvpRecord(i, h, l, INF, -1, chain_hops, 0.0, 0.0))
            continue
        cvp_hops = hs[h] + ht[h]
        omega = (chain_hops + 1) / (cvp_hops + 1)
        if cost > 0:
            rho = (ds[l] - ds[h]) / cost
        else:
            # zero-cost via-path: the chain carries all of it iff it spans it
            rho = 1.0 if omega == 1.0 else 0.0
        records.append(CvpRecord(i, h, l, cost, cvp_hops, chain_hops, omega, rho))
    return records


def _rank_key(measure: str):
    if measure == "cost":
        return lambda r: (r.cost, r.head)
    if measure == "omega":
        return lambda r: (-r.omega, r.cost, r.head)
    if measure == "rho":
        return lambda r: (-r.rho, r.cost, r.head)
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def rank(records: Iterable[CvpRecord], measure: str = "cost", k: Optional[int] = None) -> list[CvpRecord]:
    """Best ``k`` records under ``measure`` (cost ascending, omega or rho descending).

    Ties fall back to cost, then head node id.
    """
    if k is not None and k < 1:
        raise ValueError("k must be positive")
    ordered = sorted(records, key=_rank_key(measure))
    return ordered if k is None else ordered[:k]


def select_by_thresholds(records: Iterable[CvpRecord], max_cost_ratio: float = 1.33,
                         min_rpc_cost_fraction: float = 0.175, k: Optional[int] = None) -> list[CvpRecord]:
    """Reachable records within ``max_cost_ratio`` of the cheapest and with
    ``rho >= min_rpc_cost_fraction``, cheapest first, optionally capped at ``k``."""
    finite = [r for r in records if r.reachable]
    if not finite:
        return []
    best = min(r.cost for r in finite)
    bound = best * max_cost_ratio if max_cost_ratio != INF else INF
    keep = [r for r in finite if r.cost <= bound and r.rho >= min_rpc_cost_fraction]
    return rank(keep, "cost", k)


def extract_cvp(chain: Sequence[int], trees: tuple[ShortestPathTree, ShortestPathTree], s: int, t: int) -> ExplicitPath:
    """Complete a chain into its full via-path by walking both trees to their roots."""
    g_beta, g_phi = trees
    head, tail = chain[0], chain[-1]
    if not (g_beta.reachable(head) and g_phi.reachable(tail)):
        raise GraphError(f"chain starting at {head} is cut off from the source or target")
    prefix = []
    x = head
    while x != s:
        x = g_beta.parent[x]
        prefix.append(x)
    prefix.reverse()
    suffix = []
    x = tail
    while x != t:
        x = g_phi.parent[x]
        suffix.append(x)
    return ExplicitPath(prefix + list(chain) + suffix, g_beta.dist[tail] + g_phi.dist[tail])


def extract_all(records: Iterable[CvpRecord], partition: Partition,
                trees: tuple[ShortestPathTree, ShortestPathTree], s: int, t: int) -> list[ExplicitPath]:
    return [extract_cvp(partition.chains[r.chain_index], trees, s, t) for r in records if r.reachable]


def format_hours(hours: float) -> str:
    """``4.0667`` -> ``'4 hrs, 4 mins'``."""
    if not math.isfinite(hours):
        return "unreachable"
    total = int(round(hours * 60))
    return f"{total // 60} hrs, {total % 60} mins"


def check_path(graph: Graph, path: ExplicitPath, rel_tol: float = 1e-9) -> bool:
    """Consecutive nodes adjacent and stored cost equal to the edge-cost sum."""
    try:
        total = graph.path_cost(path.nodes)
    except GraphError:
        return False
    return math.isclose(total, path.cost, rel_tol=rel_tol, abs_tol=0.0) or total == path.cost
