"""scikit-learn style wrappers over the routing pipeline and the layer detector."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .graph import Graph, GraphError
from .pipeline import compute_cvps
from .ranking import MEASURES
from .trellis import CostMap, TrellisParams, boundary_mask, detect_layers


def check_graph(graph) -> Graph:
    if not isinstance(graph, Graph):
        raise TypeError(f"expected a Graph, got {type(graph).__name__}")
    if graph.node_count < 2:
        raise GraphError("graph needs at least two nodes")
    return graph


def check_pairs(pairs, node_count: int) -> np.ndarray:
    """``(n, 2)`` int array of source/target ids, all in range."""
    arr = check_array(pairs, dtype=np.int64, ensure_2d=True)
    if arr.shape[1] != 2:
        raise ValueError(f"pairs must have 2 columns, got {arr.shape[1]}")
    if arr.min() < 0 or arr.max() >= node_count:
        raise GraphError("pair refers to a node outside the graph")
    return arr


def check_costmap(X) -> CostMap:
    if isinstance(X, CostMap):
        return X
    return CostMap(check_array(X, dtype=np.float64, ensure_min_features=2))


class ViaPathRouter(BaseEstimator):
    """Fits on a graph; ``predict`` returns the ranked via-paths for each pair."""

    def __init__(self, measure="cost", k=None, max_cost_ratio=None, min_rpc_cost_fraction=None,
                 ties=("first", "last")):
        self.measure = measure
        self.k = k
        self.max_cost_ratio = max_cost_ratio
        self.min_rpc_cost_fraction = min_rpc_cost_fraction
        self.ties = ties

    def fit(self, graph, y=None):
        if self.measure not in MEASURES:
            raise ValueError(f"measure must be one of {MEASURES}")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be positive")
        self.graph_ = check_graph(graph)
        self.n_nodes_ = graph.node_count
        return self

    def route(self, source: int, target: int):
        """``(records, paths)`` for one pair."""
        check_is_fitted(self, "graph_")
        result = compute_cvps(self.graph_, source, target, tuple(self.ties))
        records = result.choose(self.measure, self.k, self.max_cost_ratio, self.min_rpc_cost_fraction)
        return records, [result.extract(r) for r in records]

    def predict(self, pairs):
        check_is_fitted(self, "graph_")
        arr = check_pairs(pairs, self.n_nodes_)
        return [self.route(int(s), int(t))[1] for s, t in arr]


class LayerBoundaryDetector(BaseEstimator, TransformerMixin):
    """Boundary detection on one 2-D map. ``transform`` gives a label image."""

    def __init__(self, window=2, sigma=1.0, evidence_weight=1.0, threshold=0.25, min_chain_len=3,
                 threshold_mode="mean"):
        self.window = window
        self.sigma = sigma
        self.evidence_weight = evidence_weight
        self.threshold = threshold
        self.min_chain_len = min_chain_len
        self.threshold_mode = threshold_mode

    def _params(self) -> TrellisParams:
        return TrellisParams(self.window, self.sigma, self.evidence_weight, self.threshold,
                             self.min_chain_len, self.threshold_mode)

    def fit(self, X, y=None):
        self.params_ = self._params()
        cm = check_costmap(X)
        self.shape_ = (cm.rows, cm.cols)
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        return detect_layers(check_costmap(X), self.params_)

    def transform(self, X):
        check_is_fitted(self, "params_")
        cm = check_costmap(X)
        return boundary_mask(cm, detect_layers(cm, self.params_))
