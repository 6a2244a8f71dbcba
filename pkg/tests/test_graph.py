import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwiso.graph import (
    GraphParseError,
    GraphTooLarge,
    NotDisjoint,
    SelfLoop,
    VertexOutOfRange,
    VertexSet,
    components,
    disjoint_union,
    edge_boundary,
    edge_boundary_all,
    format_graph,
    is_connected,
    new_graph,
    parse_graph,
    read_graph,
    vertex_boundary,
    vertex_boundary_all,
    write_graph,
)

from oracles import complete_edges, cycle_edges, edge_cut, neighbours, sym_vertex_cut


def cycle(m):
    return new_graph(m, cycle_edges(m))


def complete(k):
    return new_graph(k, complete_edges(k))


def test_triangle():
    g = new_graph(3, [(0, 1), (1, 2), (2, 0)])
    assert g.regular_degree == 2
    assert g.num_edges == 3


def test_duplicate_edges_collapse():
    g = new_graph(2, [(0, 1), (1, 0)])
    assert g.regular_degree == 1
    assert g.edges == [(0, 1)]


def test_bad_edges():
    with pytest.raises(SelfLoop):
        new_graph(4, [(0, 0)])
    with pytest.raises(VertexOutOfRange):
        new_graph(3, [(0, 3)])
    with pytest.raises(GraphTooLarge):
        new_graph(129, [])


def test_irregular_has_no_degree():
    g = new_graph(3, [(0, 1), (1, 2)])
    assert g.regular_degree is None
    assert g.degree_sequence == (1, 2, 1)


def test_edge_boundary_examples():
    assert edge_boundary(cycle(4), {0, 1}, {2, 3}) == 2
    assert edge_boundary(cycle(5), set(), range(5)) == 0
    assert edge_boundary(complete(4), {0}, {1, 2, 3}) == 3
    with pytest.raises(NotDisjoint):
        edge_boundary(cycle(4), {0, 1}, {1, 2})


def test_edge_boundary_all_examples():
    assert edge_boundary_all(cycle(6), {0, 1, 2}) == 2
    assert edge_boundary_all(cycle(6), range(6)) == 0
    assert edge_boundary_all(complete(4), {0, 1}) == 4


def test_vertex_boundary_examples():
    assert vertex_boundary(cycle(6), {0, 1, 2}, {3, 4, 5}) == 4
    two = disjoint_union(complete(3), complete(3))
    assert vertex_boundary(two, {0, 1, 2}, {3, 4, 5}) == 0
    assert vertex_boundary(complete(4), {0}, {1, 2, 3}) == 4


def test_vertex_boundary_all_examples():
    assert vertex_boundary_all(cycle(6), {0, 1, 2}) == 4
    assert vertex_boundary_all(cycle(6), range(6)) == 0
    assert vertex_boundary_all(cycle(4), {0}) == 3


def test_components():
    two = disjoint_union(complete(3), complete(3))
    assert not is_connected(two)
    assert components(two) == [VertexSet.of({0, 1, 2}), VertexSet.of({3, 4, 5})]
    assert is_connected(cycle(6))
    assert len(components(new_graph(3, []))) == 3


def test_vertex_set_basics():
    s = VertexSet.of([3, 1])
    assert list(s) == [1, 3]
    assert 3 in s and 2 not in s
    assert s.cardinality == 2


def test_text_round_trip(tmp_path):
    g = complete(4)
    assert parse_graph(format_graph(g)) == g
    write_graph(g, tmp_path / "k4.graph")
    assert read_graph(tmp_path / "k4.graph") == g


def test_parse_comments_and_errors():
    g = parse_graph("# a path\ngraph 3\ne 0 1  # first\ne 1 2\n")
    assert g.edges == [(0, 1), (1, 2)]
    for bad in ("e 0 1\n", "graph x\n", "graph 3\ne 0\n", "graph 2\nq 0 1\n"):
        with pytest.raises(GraphParseError):
            parse_graph(bad)


@st.composite
def graphs(draw, max_vertices=10):
    num = draw(st.integers(1, max_vertices))
    pairs = [(u, v) for u in range(num) for v in range(u + 1, num)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return new_graph(num, edges)


@st.composite
def graph_and_sets(draw):
    g = draw(graphs())
    labels = draw(st.lists(st.integers(0, 2), min_size=g.num_vertices, max_size=g.num_vertices))
    a = {v for v, x in enumerate(labels) if x == 0}
    b = {v for v, x in enumerate(labels) if x == 1}
    return g, a, b


@settings(max_examples=200, deadline=None)
@given(graph_and_sets())
def test_boundaries_match_oracle(data):
    g, a, _ = data
    nb = neighbours(g.num_vertices, g.edges)
    assert edge_boundary_all(g, a) == edge_cut(nb, a)
    assert vertex_boundary_all(g, a) == sym_vertex_cut(nb, a)


@settings(max_examples=200, deadline=None)
@given(graph_and_sets())
def test_complement_symmetry(data):
    g, a, _ = data
    rest = set(range(g.num_vertices)) - a
    assert edge_boundary_all(g, a) == edge_boundary_all(g, rest)


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 9), st.data())
def test_boundaries_invariant_under_rotations(m, data):
    c = cycle(m)
    labels = data.draw(st.lists(st.integers(0, 2), min_size=m, max_size=m))
    k = data.draw(st.integers(0, m - 1))
    a = {v for v in range(m) if labels[v] == 0}
    b = {v for v in range(m) if labels[v] == 1}
    ga = {(v + k) % m for v in a}
    gb = {(v + k) % m for v in b}
    assert edge_boundary(c, ga, gb) == edge_boundary(c, a, b)
    assert vertex_boundary(c, ga, gb) == vertex_boundary(c, a, b)


@settings(max_examples=200, deadline=None)
@given(graph_and_sets(), st.data())
def test_boundary_monotone(data, more):
    g, a, b = data
    rest = sorted(set(range(g.num_vertices)) - a - b)
    extra = more.draw(st.lists(st.sampled_from(rest), unique=True)) if rest else []
    half = len(extra) // 2
    a2, b2 = a | set(extra[:half]), b | set(extra[half:])
    assert edge_boundary(g, a, b) <= edge_boundary(g, a2, b2)
    assert vertex_boundary(g, a, b) <= vertex_boundary(g, a2, b2)


@settings(max_examples=200, deadline=None)
@given(graph_and_sets())
def test_boundary_subadditive(data):
    g, a, b = data
    for bound in (edge_boundary_all, vertex_boundary_all):
        assert bound(g, a & b) <= bound(g, a) + bound(g, b)
        assert bound(g, a | b) <= bound(g, a) + bound(g, b)
