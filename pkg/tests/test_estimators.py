import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cvp_toolkit.estimators import LayerBoundaryDetector, ViaPathRouter, check_pairs
from cvp_toolkit.fixtures import LETTER_ID, letter_graph
from cvp_toolkit.graph import GraphError
from cvp_toolkit.trellis import planted_bands

S, T = LETTER_ID["s"], LETTER_ID["t"]


def test_router_predicts_paths_per_pair():
    router = ViaPathRouter(k=3).fit(letter_graph())
    (paths,) = router.predict([[S, T]])
    assert [p.cost for p in paths] == [11, 11, 12]


def test_router_thresholds_and_measure():
    router = ViaPathRouter(measure="omega", max_cost_ratio=1.1, min_rpc_cost_fraction=0.3).fit(letter_graph())
    records, paths = router.route(S, T)
    assert [r.omega for r in records] == [1.0, 0.5]


def test_router_params_round_trip():
    r = ViaPathRouter(k=4, measure="rho")
    assert clone(r).get_params()["k"] == 4
    r.set_params(k=2)
    assert r.k == 2


def test_router_validation():
    with pytest.raises(NotFittedError):
        ViaPathRouter().predict([[0, 1]])
    with pytest.raises(ValueError):
        ViaPathRouter(measure="speed").fit(letter_graph())
    with pytest.raises(TypeError):
        ViaPathRouter().fit(np.eye(3))
    with pytest.raises(GraphError):
        check_pairs([[0, 99]], 14)
    with pytest.raises(ValueError):
        check_pairs([[0, 1, 2]], 14)


def test_detector_transform_and_predict():
    X = planted_bands(16, 20, [4, 11], noise=0.02, rng=np.random.default_rng(0)).values
    det = LayerBoundaryDetector(window=1)
    mask = det.fit_transform(X)
    assert mask.shape == X.shape and mask.max() == 2
    assert len(det.predict(X)) == 2
    assert det.get_params()["window"] == 1
    with pytest.raises(NotFittedError):
        LayerBoundaryDetector().transform(X)
    with pytest.raises(ValueError):
        LayerBoundaryDetector(sigma=-1).fit(X)
