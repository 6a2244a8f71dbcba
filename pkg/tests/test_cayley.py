import pytest

from mwiso.cayley import (
    ContainsIdentity,
    NotSymmetric,
    ParamOutOfRange,
    cayley_graph,
    cyclic_group,
    dihedral_group,
    dihedral_product_split,
    family_complete,
    family_cycle,
    family_dihedral_product,
    family_fattened_cycle,
    family_k2_product,
    generated_subgroup,
    k2_product_split,
    product_group,
    symmetric_group_table,
)
from mwiso.graph import edge_boundary_all, is_connected
from mwiso.perm import acts_by_automorphisms, is_transitive


def test_group_tables_are_groups():
    for tbl in (cyclic_group(7), dihedral_group(4), product_group(cyclic_group(3), cyclic_group(2)),
                symmetric_group_table(3)[0]):
        tbl.check()


def test_dihedral_relations():
    d = dihedral_group(5)
    a, b = d.names["a"], d.names["b"]
    assert d(a, a) == d.identity and d(b, b) == d.identity
    r = d(a, b)
    assert d.power(r, 5) == d.identity
    assert all(d.power(r, k) != d.identity for k in range(1, 5))
    assert generated_subgroup(d, [a, b]) == set(range(10))


def test_cayley_rejects_bad_sets():
    z5 = cyclic_group(5)
    with pytest.raises(NotSymmetric):
        cayley_graph(z5, [1])
    with pytest.raises(ContainsIdentity):
        cayley_graph(z5, [0, 1, 4])


def test_cycle_and_complete():
    g, gr = family_cycle(7)
    assert g.regular_degree == 2 and is_connected(g)
    assert acts_by_automorphisms(g, gr) and is_transitive(gr)
    g, _ = family_complete(5)
    assert g.num_edges == 10
    with pytest.raises(ParamOutOfRange):
        family_cycle(2)


def test_fattened_cycle():
    g, gr = family_fattened_cycle(5, 3)
    assert g.num_vertices == 15 and g.regular_degree == 6
    assert acts_by_automorphisms(g, gr)


def test_k2_product_split_cuts_n_edges():
    for N in (3, 4, 6):
        g, gr = family_k2_product(N)
        assert g.regular_degree == N
        split = k2_product_split(N)
        assert split.sizes() == [N, N]
        assert all(edge_boundary_all(g, m) == N for m in split.masks())


def test_dihedral_product_split():
    N, n = 3, 3
    g, gr = family_dihedral_product(N, n)
    assert g.num_vertices == 2 * N * n
    assert g.regular_degree == 2 * (N - 1) + 1
    assert acts_by_automorphisms(g, gr) and is_transitive(gr)
    split = dihedral_product_split(N, n)
    assert split.sizes() == [2 * N] * n
    # each part is H x {r^i, r^i a}, so only the b-edges leave it
    assert all(edge_boundary_all(g, m) == 2 * N for m in split.masks())
