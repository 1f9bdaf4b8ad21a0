import math

import pytest
from hypothesis import given, settings

from cvp_toolkit.fixtures import LETTER_ID, letter_graph, names
from cvp_toolkit.graph import Graph, GraphError
from cvp_toolkit.pipeline import compute_cvps
from cvp_toolkit.ranking import check_path, format_hours, rank, select_by_thresholds
from strategies import queries

S, T = LETTER_ID["s"], LETTER_ID["t"]


@pytest.fixture(scope="module")
def result():
    return compute_cvps(letter_graph(), S, T)


def _by_chain(result):
    return {tuple(names(result.chain(r))): r for r in result.records}


def test_scores_for_letter_graph(result):
    recs = _by_chain(result)
    ekm = recs[("e", "k", "m")]
    assert (ekm.cost, ekm.omega, ekm.rho) == (12, 0.5, pytest.approx(1 / 3))
    h = recs[("h",)]
    assert (h.cost, h.omega, h.rho) == (11, 0.2, 0.0)
    main = recs[tuple("sdgjt")]
    assert (main.omega, main.rho) == (1.0, 1.0)


def test_rank_orders(result):
    assert [r.cost for r in result.best("cost")] == [11, 11, 12, 13, 13]
    assert [names(result.chain(r)) for r in result.best("omega", 2)] == [list("sdgjt"), list("cfil")]
    assert [r.rho for r in result.best("rho")][:2] == [1.0, pytest.approx(7 / 13)]
    with pytest.raises(ValueError):
        rank(result.records, "length")
    with pytest.raises(ValueError):
        rank(result.records, "cost", 0)


def test_thresholds(result):
    kept = select_by_thresholds(result.records, 1.1, 0.3)
    assert [names(result.chain(r)) for r in kept] == [list("sdgjt"), list("ekm")]
    assert select_by_thresholds(result.records, 2.0, 0.0, k=2) == result.best("cost", 2)


def test_extraction_follows_both_trees(result):
    paths = [names(result.extract(r).nodes) for r in result.best("cost")]
    assert paths[1] == list("sdhjt")
    assert list("sbekmt") in paths


def test_unreachable_record():
    g = Graph.from_edges(3, [(0, 1, 1.0)])
    res = compute_cvps(g, 0, 1)
    lost = next(r for r in res.records if res.chain(r) == (2,))
    assert not lost.reachable and lost.omega == lost.rho == 0 and lost.cost == math.inf
    with pytest.raises(GraphError):
        res.extract(lost)
    assert res.best() == [r for r in res.records if r.reachable]


def test_zero_cost_via_path():
    g = Graph.from_edges(3, [(0, 1, 0.0), (1, 2, 0.0), (0, 2, 0.0)])
    res = compute_cvps(g, 0, 2)
    assert all(r.rho in (0.0, 1.0) for r in res.records)


def test_format_hours():
    assert format_hours(4 + 4 / 60) == "4 hrs, 4 mins"
    assert format_hours(0.999) == "1 hrs, 0 mins"
    assert format_hours(math.inf) == "unreachable"


@given(queries())
@settings(max_examples=150)
def test_extracted_paths_are_consistent(q):
    g, s, t = q
    res = compute_cvps(g, s, t)
    for r in res.best():
        p = res.extract(r)
        assert p.nodes[0] == s and p.nodes[-1] == t
        assert check_path(g, p)
        assert p.cost == r.cost
        assert len(p.nodes) == r.cvp_hops + 1
        assert 0 < r.omega <= 1 and 0 <= r.rho <= 1
        chain = res.chain(r)
        i = p.nodes.index(chain[0])
        assert p.nodes[i:i + len(chain)] == chain
