"""The four-stage via-path pipeline: trees, partition, scoring, extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, GraphError
from .partition import Partition, partition_rpc
from .ranking import CvpRecord, ExplicitPath, extract_cvp, rank, score_chains, select_by_thresholds
from .spt import DEFAULT_TIES, ShortestPathTree, cvp_trees


@dataclass(frozen=True, eq=False)
class CvpResult:
    source: int
    target: int
    trees: tuple
    partition: Partition
    records: list

    @property
    def g_beta(self) -> ShortestPathTree:
        return self.trees[0]

    @property
    def g_phi(self) -> ShortestPathTree:
        return self.trees[1]

    @property
    def shortest_cost(self) -> float:
        return self.g_beta.dist[self.target]

    def chain(self, record: CvpRecord) -> tuple:
        return self.partition.chains[record.chain_index]

    def extract(self, record: CvpRecord) -> ExplicitPath:
        return extract_cvp(self.chain(record), self.trees, self.source, self.target)

    def best(self, measure: str = "cost", k: Optional[int] = None) -> list[CvpRecord]:
        return rank([r for r in self.records if r.reachable], measure, k)

    def select(self, max_cost_ratio: float, min_rpc_cost_fraction: float, k: Optional[int] = None) -> list[CvpRecord]:
        return select_by_thresholds(self.records, max_cost_ratio, min_rpc_cost_fraction, k)

    def choose(self, measure: str = "cost", k: Optional[int] = None, max_cost_ratio: Optional[float] = None,
               min_rpc_cost_fraction: Optional[float] = None) -> list[CvpRecord]:
        """Threshold filter (when either threshold is given), then rank by ``measure`` and cap at ``k``."""
        if max_cost_ratio is None and min_rpc_cost_fraction is None:
            return self.best(measure, k)
        kept = self.select(math.inf if max_cost_ratio is None else max_cost_ratio,
                           0.0 if min_rpc_cost_fraction is None else min_rpc_cost_fraction)
        return rank(kept, measure, k)


def compute_cvps(graph: Graph, source: int, target: int, ties=DEFAULT_TIES) -> CvpResult:
    for v, name in ((source, "source"), (target, "target")):
        if not 0 <= v < graph.node_count:
            raise GraphError(f"{name} {v} is not a node")
    trees = cvp_trees(graph, source, target, ties)
    partition = partition_rpc(trees[0], trees[1], source, target)
    return CvpResult(source, target, trees, partition, score_chains(partition, trees))
