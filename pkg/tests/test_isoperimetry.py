import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwiso.graph import disjoint_union, new_graph
from mwiso.isoperimetry import (
    EnumerationTooLarge,
    NotRegular,
    NOutOfRange,
    Quantity,
    _minimize,
    exhaustive,
    h_n,
    iota_n,
    iota_tilde_n,
    minimize,
    normalized,
    partition_ratio,
    rho_n,
)
from mwiso.partition import EmptyPart, Partition

from oracles import brute, complete_edges, cycle_edges

F = Fraction


def cycle(m):
    return new_graph(m, cycle_edges(m))


def complete(k):
    return new_graph(k, complete_edges(k))


def two_triangles():
    return disjoint_union(complete(3), complete(3))


def test_partition_ratio_examples():
    arcs = Partition((0, 0, 0, 1, 1, 1), 2)
    assert partition_ratio(cycle(6), arcs, "h") == F(2, 3)
    assert partition_ratio(cycle(6), arcs, "iota") == F(4, 3)
    assert partition_ratio(cycle(6), Partition((0,) * 6, 1), "h") == 0


def test_partition_ratio_rejects_uncovered():
    with pytest.raises(EmptyPart):
        partition_ratio(cycle(4), Partition((0, 1, -1, 1), 2), "h")


def test_c6_values():
    # frozen from the brute-force oracle in tests/oracles.py
    g = cycle(6)
    r = h_n(g, 2)
    assert r.value == F(2, 3)
    assert r.realizer.part_of == (0, 0, 0, 1, 1, 1)
    assert iota_n(g, 2).value == F(4, 3)
    assert rho_n(g, 2).value == F(1, 3)
    assert iota_tilde_n(g, 2).value == F(4, 3)
    assert h_n(g, 3).value == 1
    assert iota_n(g, 3).value == 2


def test_k4_and_components():
    assert h_n(complete(4), 2).value == 2
    assert iota_n(complete(4), 2).value == 2
    assert h_n(two_triangles(), 2).value == 0
    assert iota_n(two_triangles(), 2).value == 0
    assert iota_tilde_n(two_triangles(), 2).value == 0
    assert h_n(two_triangles(), 3).value == 2


def test_c5_values():
    g = cycle(5)
    assert [h_n(g, n).value for n in (2, 3)] == [1, 2]
    assert [iota_n(g, n).value for n in (2, 3)] == [2, 3]


def test_n_one_and_range():
    assert h_n(cycle(5), 1).value == 0
    assert rho_n(cycle(5), 1).value == 0
    with pytest.raises(NOutOfRange):
        h_n(cycle(5), 6)
    with pytest.raises(NOutOfRange):
        h_n(cycle(5), 0)


def test_rho_needs_regular():
    with pytest.raises(NotRegular):
        rho_n(new_graph(3, [(0, 1), (1, 2)]), 2)


def test_normalized():
    assert normalized(F(2, 3), 2) == F(1, 3)
    assert normalized(F(0), 5) == 0
    assert normalized(h_n(cycle(6), 2), 2) == F(1, 3)


def test_guard():
    g = cycle(30)
    with pytest.raises(EnumerationTooLarge):
        h_n(g, 5)
    with pytest.raises(EnumerationTooLarge):
        rho_n(cycle(12), 6)


def test_to_json():
    d = h_n(cycle(6), 2).to_json()
    assert d == {"quantity": "h", "n": 2, "num": 2, "den": 3, "realizer": [0, 0, 0, 1, 1, 1]}


def _random_graph(rng, max_vertices=7):
    num = rng.randint(2, max_vertices)
    p = rng.random()
    return new_graph(num, [(u, v) for u in range(num) for v in range(u + 1, num) if rng.random() < p])


def test_search_matches_naive_oracle():
    rng = random.Random(11)
    for _ in range(25):
        g = _random_graph(rng, 6)
        for q in Quantity:
            if q is Quantity.RHO and not g.regular_degree:
                continue
            for n in range(1, g.num_vertices + 1):
                assert minimize(g, n, q).value == brute(g.num_vertices, g.edges, n, q.value)


def test_realizer_is_lex_least_minimizer():
    rng = random.Random(3)
    for _ in range(30):
        g = _random_graph(rng)
        for q in (Quantity.H, Quantity.IOTA, Quantity.IOTA_TILDE):
            for n in range(1, g.num_vertices + 1):
                fast = minimize(g, n, q)
                slow = exhaustive(g, n, q)
                assert (fast.value, fast.realizer) == (slow.value, slow.realizer)
                assert partition_ratio(g, fast.realizer, q) == fast.value


@pytest.mark.parametrize("compiled,workers", [(False, 1), (True, 1), (True, 3), (False, 2)])
def test_backends_and_chunking_agree(compiled, workers):
    rng = random.Random(7)
    for _ in range(8):
        g = _random_graph(rng, 8)
        for q in (Quantity.H, Quantity.IOTA):
            for n in (2, 3):
                if n > g.num_vertices:
                    continue
                a = _minimize(g, n, q, 10**9, workers, compiled)
                b = exhaustive(g, n, q)
                assert (a.value, a.realizer) == (b.value, b.realizer)


@st.composite
def regular_graphs(draw):
    kind = draw(st.sampled_from(["cycle", "complete", "union"]))
    if kind == "cycle":
        return cycle(draw(st.integers(3, 9)))
    if kind == "complete":
        return complete(draw(st.integers(2, 6)))
    k = draw(st.integers(3, 4))
    return disjoint_union(cycle(k), cycle(k))


@settings(max_examples=30, deadline=None)
@given(regular_graphs(), st.data())
def test_sandwiches(g, data):
    d = g.regular_degree
    n = data.draw(st.integers(1, g.num_vertices - 1))
    h, io = h_n(g, n).value, iota_n(g, n).value
    assert h <= h_n(g, n + 1).value
    assert io <= iota_n(g, n + 1).value
    assert 2 * h / d <= io <= 2 * h
    r = rho_n(g, n).value
    assert r <= h / d <= n * r
    t = iota_tilde_n(g, n).value
    assert t <= io <= n * t


def test_zero_iff_enough_components():
    g = disjoint_union(cycle(3), cycle(4), complete(2))
    for n in range(1, g.num_vertices + 1):
        assert (h_n(g, n).value == 0) == (n <= 3)
    assert h_n(cycle(7), 2).value > 0
