import pytest
from hypothesis import given, settings, strategies as st

from girthlab.graphs import (Graph, GraphError, GraphFormatError, parse_graph,
                             validate_cycle)


def test_simple_invariants():
    Graph(3, edges=[(0, 1), (1, 2)]).validate()
    with pytest.raises(GraphError):
        Graph(3, edges=[(0, 0)]).validate()
    with pytest.raises(GraphError):
        Graph(3, edges=[(0, 1), (1, 0)]).validate()  # undirected duplicate
    Graph(3, directed=True, edges=[(0, 1), (1, 0)]).validate()  # antiparallel ok
    with pytest.raises(GraphError):
        Graph(3, edges=[(0, 5)]).validate()
    with pytest.raises(GraphError):
        Graph(3, weighted=True, edges=[(0, 1, 7)], W=5).validate()


def test_weight_cap():
    g = Graph(10, weighted=True, edges=[(0, 1, 50)], W=50)
    g.validate()
    with pytest.raises(GraphError):
        g.validate(weight_cap_c=1.0, weight_cap_k=1.0)


def test_text_roundtrip():
    g = Graph(4, directed=True, weighted=True,
              edges=[(0, 1, 2), (1, 2, 3), (2, 0, 1)], W=3)
    g2 = parse_graph(g.to_text())
    assert g2.n == 4 and g2.edges == g.edges
    assert g2.directed and g2.weighted


def test_format_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError) as e:
        parse_graph("3 1 0 0\n0 1 9\n")
    assert e.value.lineno == 2
    with pytest.raises(GraphFormatError) as e:
        parse_graph("3 2 0 0\n0 1\nx y\n")
    assert e.value.lineno == 3
    with pytest.raises(GraphFormatError) as e:
        parse_graph("bad header\n")
    assert e.value.lineno == 1
    with pytest.raises(GraphFormatError):
        parse_graph("3 2 0 0\n0 1\n")  # edge count mismatch


def test_underlying_adjacency_merges_directions():
    g = Graph(3, directed=True, edges=[(0, 1), (1, 0), (1, 2)])
    assert g.und_neighbors(1) == [0, 2]
    assert [u for u, _ in g.out_adj[1]] == [0, 2]
    assert [u for u, _ in g.in_adj[1]] == [0]


def test_validate_cycle():
    g = Graph(4, edges=[(0, 1), (1, 2), (2, 0), (2, 3)])
    assert validate_cycle(g, [0, 1, 2]) == (3, 3)
    with pytest.raises(GraphError):
        validate_cycle(g, [0, 1, 3])
    with pytest.raises(GraphError):
        validate_cycle(g, [0, 1, 2, 1])
    gd = Graph(2, directed=True, edges=[(0, 1), (1, 0)])
    assert validate_cycle(gd, [0, 1]) == (2, 2)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 12))
    directed = draw(st.booleans())
    weighted = draw(st.booleans())
    pairs = [(u, v) for u in range(n) for v in range(n)
             if (u != v and (directed or u < v))]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=20))
    W = draw(st.integers(1, 9)) if weighted else 1
    edges = [(u, v, draw(st.integers(1, W)) if weighted else 1)
             for u, v in chosen]
    return Graph(n, directed=directed, weighted=weighted, edges=edges, W=W)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_text_roundtrip_property(g):
    g.validate()
    g2 = parse_graph(g.to_text())
    assert g2.n == g.n and g2.edges == g.edges
    assert g2.directed == g.directed and g2.weighted == g.weighted
