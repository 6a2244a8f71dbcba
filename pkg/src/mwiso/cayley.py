"""Finite groups as multiplication tables, Cayley graphs, and named graph families.

Cayley graphs join ``g`` to ``g*s`` (right multiplication), so left
multiplication by group elements acts by graph automorphisms; that left
action is returned alongside each graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from mwiso.graph import Graph, new_graph
from mwiso.perm import Perm, PermGroup, group_from_elements
from mwiso.partition import Partition


class CayleyError(ValueError):
    pass


class NotSymmetric(CayleyError):
    pass


class ContainsIdentity(CayleyError):
    pass


class ParamOutOfRange(CayleyError):
    pass


@dataclass(frozen=True)
class FiniteGroupTable:
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int
    names: dict = field(default_factory=dict, compare=False)

    def __call__(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def power(self, a: int, k: int) -> int:
        x = self.identity
        for _ in range(k):
            x = self.mul[x][a]
        return x

    def check(self) -> None:
        """Verify identity, inverse, and (for order <= 64) associativity laws."""
        r = range(self.order)
        e = self.identity
        for a in r:
            if self.mul[e][a] != a or self.mul[a][e] != a:
                raise CayleyError(f"identity law fails at {a}")
            if self.mul[a][self.inv[a]] != e or self.mul[self.inv[a]][a] != e:
                raise CayleyError(f"inverse law fails at {a}")
        if self.order <= 64:
            m = self.mul
            for a in r:
                for b in r:
                    ab = m[a][b]
                    for c in r:
                        if m[ab][c] != m[a][m[b][c]]:
                            raise CayleyError(f"associativity fails at {(a, b, c)}")


def table_from_mul(mul: Sequence[Sequence[int]], names: dict | None = None) -> FiniteGroupTable:
    order = len(mul)
    mul_t = tuple(tuple(row) for row in mul)
    identity = next(e for e in range(order) if all(mul_t[e][a] == a for a in range(order)))
    inv = tuple(next(b for b in range(order) if mul_t[a][b] == identity) for a in range(order))
    return FiniteGroupTable(order, mul_t, inv, identity, dict(names or {}))


def cyclic_group(k: int) -> FiniteGroupTable:
    if k < 1:
        raise ParamOutOfRange("cyclic group order must be >= 1")
    return table_from_mul([[(a + b) % k for b in range(k)] for a in range(k)])


def dihedral_group(n: int) -> FiniteGroupTable:
    """Order-2n dihedral group: index i is r^i and n+i is r^i a, with r = ab.

    The designated involutions are ``a`` (index n) and ``b`` = r^(n-1) a.
    """
    if n < 2:
        raise ParamOutOfRange("dihedral group needs n >= 2")

    def mul(x: int, y: int) -> int:
        i, fx = x % n, x >= n
        j, fy = y % n, y >= n
        # a r^j = r^-j a
        k = (i - j) % n if fx else (i + j) % n
        return k + n if fx != fy else k

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return table_from_mul(table, {"a": n, "b": n + n - 1, "ab": 1 % n})


def product_group(a: FiniteGroupTable, b: FiniteGroupTable) -> FiniteGroupTable:
    """Direct product with element ``(x, y)`` stored at ``x * |B| + y``."""
    nb = b.order
    table = [
        [a.mul[i // nb][j // nb] * nb + b.mul[i % nb][j % nb] for j in range(a.order * nb)]
        for i in range(a.order * nb)
    ]
    return table_from_mul(table)


def symmetric_group_table(k: int) -> tuple[FiniteGroupTable, list[Perm]]:
    """The symmetric group on k points, elements in lex order of their images."""
    from itertools import permutations

    elems = [Perm(p) for p in permutations(range(k))]
    idx = {p.images: i for i, p in enumerate(elems)}
    table = [[idx[(p * q).images] for q in elems] for p in elems]
    return table_from_mul(table), elems


def left_action(tbl: FiniteGroupTable) -> PermGroup:
    perms = [Perm(tuple(tbl.mul[h][g] for g in range(tbl.order))) for h in range(tbl.order)]
    return group_from_elements(perms, tbl.order, source="cayley-left")


def cayley_graph(tbl: FiniteGroupTable, s: Iterable[int]) -> tuple[Graph, PermGroup]:
    s = sorted(set(s))
    if tbl.identity in s:
        raise ContainsIdentity("connection set contains the identity")
    if {tbl.inv[x] for x in s} != set(s):
        raise NotSymmetric("connection set is not closed under inverses")
    edges = [(g, tbl.mul[g][x]) for g in range(tbl.order) for x in s]
    return new_graph(tbl.order, edges), left_action(tbl)


def generated_subgroup(tbl: FiniteGroupTable, s: Iterable[int]) -> set[int]:
    seen = {tbl.identity}
    frontier = [tbl.identity]
    s = list(s)
    while frontier:
        nxt = []
        for g in frontier:
            for x in s:
                h = tbl.mul[g][x]
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


# -- families ---------------------------------------------------------------------

def family_cycle(m: int) -> tuple[Graph, PermGroup]:
    if m < 3:
        raise ParamOutOfRange("cycle needs m >= 3")
    return cayley_graph(cyclic_group(m), {1, m - 1})


def family_complete(N: int) -> tuple[Graph, PermGroup]:
    if N < 2:
        raise ParamOutOfRange("complete graph needs N >= 2")
    return cayley_graph(cyclic_group(N), range(1, N))


def family_fattened_cycle(m: int, k: int) -> tuple[Graph, PermGroup]:
    """Cayley graph of Z/m x Z/k with connection set {+1, -1} x Z/k.

    The literal set {1} x (Z/k minus 0) is not inverse-closed; this is its
    symmetrisation together with (+-1, 0), i.e. each vertex (i, a) is joined
    to every (i +- 1, b). Degree is 2k.
    """
    if m < 3 or k < 2:
        raise ParamOutOfRange("fattened cycle needs m >= 3 and k >= 2")
    tbl = product_group(cyclic_group(m), cyclic_group(k))
    s = [x * k + y for x in (1, m - 1) for y in range(k)]
    return cayley_graph(tbl, s)


def family_k2_product(N: int) -> tuple[Graph, PermGroup]:
    """Cay(Z/N x Z/2, (Z/N minus 0) x {0} plus (0, 1)): K_N times an edge."""
    if N < 3:
        raise ParamOutOfRange("k2-product needs N >= 3")
    tbl = product_group(cyclic_group(N), cyclic_group(2))
    s = [t * 2 for t in range(1, N)] + [1]
    return cayley_graph(tbl, s)


def k2_product_split(N: int) -> Partition:
    """The two layers Z/N x {0} and Z/N x {1}."""
    return Partition(tuple(v % 2 for v in range(2 * N)), 2)


def family_dihedral_product(N: int, n: int) -> tuple[Graph, PermGroup]:
    """Cay(Z/N x D_n, (T x {e, a}) plus (e, b)) with T = Z/N minus 0."""
    if N < 3 or n < 3:
        raise ParamOutOfRange("dihedral product needs N >= 3 and n >= 3")
    d = dihedral_group(n)
    tbl = product_group(cyclic_group(N), d)
    m = d.order
    a, b = d.names["a"], d.names["b"]
    s = [t * m + x for t in range(1, N) for x in (d.identity, a)] + [b]
    return cayley_graph(tbl, s)


def dihedral_product_split(N: int, n: int) -> Partition:
    """Parts H x {(ab)^i, (ab)^i a}, i = 0..n-1."""
    m = 2 * n
    return Partition(tuple((v % m) % n for v in range(N * m)), n)


def symmetric_group_cayley(k: int, gens: Sequence[Perm]) -> tuple[Graph, PermGroup]:
    tbl, elems = symmetric_group_table(k)
    idx = {p.images: i for i, p in enumerate(elems)}
    s = {idx[p.images] for p in gens} | {idx[p.inverse().images] for p in gens}
    return cayley_graph(tbl, s)
