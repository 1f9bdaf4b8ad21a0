import gzip
import io
import json

import pytest
from hypothesis import given

from cvp_toolkit.graph import (
    ROAD_SPEED_TABLE,
    DimacsError,
    Graph,
    GraphError,
    SpeedTable,
    apply_speed_model,
    load_graph,
    parse_coordinates,
    parse_dimacs,
    transpose,
    write_dimacs,
)
from strategies import digraphs

GR = """c tiny
p sp 3 3
a 1 2 4
a 2 3 1
a 3 1 2
"""
CO = """p aux sp co 3
v 1 -82465000 27971000
v 2 -81000000 27000000
v 3 -80224100 25787700
"""


def test_parse_shifts_ids_and_reads_coords():
    g, geo = parse_dimacs(GR, CO)
    assert g.node_count == 3
    assert sorted(g.edges()) == [(0, 1, 4.0), (1, 2, 1.0), (2, 0, 2.0)]
    assert geo.xy[0].tolist() == pytest.approx([-82.465, 27.971])


def test_parse_accepts_bytes_gzip_and_file_objects():
    raw = GR.encode()
    for src in (raw, gzip.compress(raw), io.StringIO(GR), io.BytesIO(raw)):
        g, _ = parse_dimacs(src)
        assert g.edge_count == 3


def test_parse_reads_gz_path(tmp_path):
    p = tmp_path / "g.gr.gz"
    p.write_bytes(gzip.compress(GR.encode()))
    g, geo = load_graph(p)
    assert g.edge_count == 3 and geo is None


@pytest.mark.parametrize("text, needle", [
    ("p sp 2 1\na 1 3 1\n", "out of range"),
    ("p sp 2 1\na 1 2 -1\n", "negative"),
    ("a 1 2 1\n", "before"),
    ("p sp x 1\n", "header"),
    ("p sp 2 1\nz 1 2\n", "line"),
])
def test_parse_errors_carry_line_numbers(text, needle):
    with pytest.raises(DimacsError) as exc:
        parse_dimacs(text)
    assert needle in str(exc.value)
    assert exc.value.line_no >= 1


def test_arc_count_mismatch_only_warns(caplog):
    g, _ = parse_dimacs("p sp 2 5\na 1 2 1\n")
    assert g.edge_count == 1


def test_fifth_token_is_category():
    g, _ = parse_dimacs("p sp 2 1\na 1 2 10 25\n")
    assert g.categories.tolist() == [25]


def test_coordinates_must_cover_every_node():
    with pytest.raises(GraphError):
        parse_coordinates("v 1 0 0\n", 2)


def test_graph_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2, 1.0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1, -1.0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1, float("nan"))])


def test_arrays_are_read_only():
    g = Graph.from_edges(2, [(0, 1, 1.0)])
    with pytest.raises(ValueError):
        g.costs[0] = 5


def test_parallel_arcs_keep_cheapest_in_lookup():
    g = Graph.from_edges(2, [(0, 1, 5.0), (0, 1, 2.0), (1, 0, 1.0)])
    assert g.arc_costs[(0, 1)] == 2.0
    assert g.segment_count == 1
    assert g.path_cost([0, 1, 0]) == 3.0
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1, 1.0)]).path_cost([0, 2])


def test_subgraph_keeps_induced_arcs():
    g = Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 9)])
    sub, keep = g.subgraph({0, 1, 3})
    assert keep == [0, 1, 3]
    assert sorted(sub.edges()) == [(0, 1, 1.0), (0, 2, 9.0)]


@given(digraphs())
def test_transpose_is_an_involution(g):
    assert transpose(transpose(g)).same_structure(g)


@given(digraphs())
def test_dimacs_round_trip(g):
    back, _ = parse_dimacs(write_dimacs(g))
    assert back.same_structure(g)


@given(digraphs())
def test_json_round_trip(g):
    assert Graph.from_json(json.loads(json.dumps(g.to_json()))).same_structure(g)


@given(digraphs())
def test_adjacency_views_agree(g):
    out = sorted((u, v, c) for u in range(g.node_count) for v, c in g.successors(u))
    inn = sorted((u, v, c) for v in range(g.node_count) for u, c in g.predecessors(v))
    assert out == inn == sorted(g.edges())


def test_speed_table_values():
    assert ROAD_SPEED_TABLE.speed(13) == 70
    assert ROAD_SPEED_TABLE.speed(25) == 60
    assert ROAD_SPEED_TABLE.speed(21) == 55
    assert ROAD_SPEED_TABLE.speed(38) == 37.5
    assert ROAD_SPEED_TABLE.speed(41) == 22.5
    with pytest.raises(GraphError, match="36"):
        ROAD_SPEED_TABLE.speed(36)


def test_speed_model_turns_miles_into_hours():
    g = Graph.from_edges(3, [(0, 1, 70.0), (1, 2, 22.5)], categories=[11, 48])
    h = apply_speed_model(g)
    assert h.costs.tolist() == [1.0, 1.0]
    assert apply_speed_model(g, miles_per_unit=0.5).costs.tolist() == [0.5, 0.5]
    with pytest.raises(GraphError):
        apply_speed_model(Graph.from_edges(2, [(0, 1, 1.0)]))
    with pytest.raises(GraphError):
        SpeedTable({1: 0.0})
