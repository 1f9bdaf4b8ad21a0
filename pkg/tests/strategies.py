"""Hypothesis strategies for small weighted digraphs."""

from hypothesis import strategies as st

from cvp_toolkit.graph import Graph


@st.composite
def digraphs(draw, min_nodes=2, max_nodes=8, max_weight=9, zero_weights=False):
    n = draw(st.integers(min_nodes, max_nodes))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    arcs = draw(st.lists(pair, max_size=n * 3))
    lo = 0 if zero_weights else 1
    weights = draw(st.lists(st.integers(lo, max_weight), min_size=len(arcs), max_size=len(arcs)))
    return Graph.from_edges(n, [(u, v, float(w)) for (u, v), w in zip(arcs, weights)])


@st.composite
def queries(draw, **kw):
    g = draw(digraphs(**kw))
    s = draw(st.integers(0, g.node_count - 1))
    t = draw(st.integers(0, g.node_count - 1).filter(lambda x: x != s))
    return g, s, t
