"""The built-in test corpus of graphs with transitive automorphism actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from mwiso.cayley import (
    cayley_graph,
    cyclic_group,
    family_complete,
    family_cycle,
    family_dihedral_product,
    family_fattened_cycle,
    family_k2_product,
    product_group,
    symmetric_group_cayley,
)
from mwiso.graph import Graph, is_connected, new_graph
from mwiso.perm import Perm, PermGroup, acts_by_automorphisms, automorphism_group, is_transitive


# the literal {1} x (Z/k - 0) is not inverse-closed; see family_fattened_cycle
SYMMETRISED = "{+1,-1} x Z/k"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    name: str
    graph: Graph
    group: PermGroup
    family: str
    params: dict = field(default_factory=dict)
    gap_n: int | None = None

    @property
    def connected(self) -> bool:
        return is_connected(self.graph)

    @property
    def vertex_transitive(self) -> bool:
        return is_transitive(self.group)

    def describe(self) -> dict:
        return {"name": self.name, "family": self.family, "params": dict(self.params),
                "group_source": self.group.source, "group_order": self.group.order}


def _aut(g: Graph) -> PermGroup:
    return automorphism_group(g)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return new_graph(10, outer + spokes + inner)


def hypercube(k: int) -> tuple[Graph, PermGroup]:
    tbl = cyclic_group(2)
    for _ in range(k - 1):
        tbl = product_group(tbl, cyclic_group(2))
    return cayley_graph(tbl, [1 << i for i in range(k)])


def union_of_copies(order: int, copies: int, conn: list[int]) -> tuple[Graph, PermGroup]:
    """``copies`` disjoint circulants on Z/order as one Cayley graph of Z/(order * copies)."""
    m = order * copies
    return cayley_graph(cyclic_group(m), [c * copies % m for c in conn])


def _make() -> list[Instance]:
    out: list[Instance] = []

    def add(name, pair, family, params=None, gap_n=None):
        g, gr = pair
        out.append(Instance(name, g, gr, family, dict(params or {}), gap_n))

    for m in range(5, 13):
        add(f"C{m}", family_cycle(m), "cycle", {"m": m})
    g6, _ = family_cycle(6)
    add("C6-dihedral", (g6, _aut(g6)), "cycle", {"m": 6})
    for N in range(3, 7):
        add(f"K{N}", family_complete(N), "complete", {"N": N})
    for N in (4, 5):
        gk, _ = family_complete(N)
        add(f"K{N}-sym", (gk, _aut(gk)), "complete", {"N": N})
    gp = petersen()
    add("petersen", (gp, _aut(gp)), "petersen")
    q3 = hypercube(3)
    add("Q3", q3, "hypercube", {"k": 3})
    add("Q3-aut", (q3[0], _aut(q3[0])), "hypercube", {"k": 3})

    add("2K3", union_of_copies(3, 2, [1, 2]), "union", {"copies": 2, "of": "K3"}, gap_n=2)
    add("3K2", union_of_copies(2, 3, [1]), "union", {"copies": 3, "of": "K2"}, gap_n=3)
    add("2C4", union_of_copies(4, 2, [1, 3]), "union", {"copies": 2, "of": "C4"}, gap_n=2)
    add("2K4", union_of_copies(4, 2, [1, 2, 3]), "union", {"copies": 2, "of": "K4"}, gap_n=2)
    add("3K3", union_of_copies(3, 3, [1, 2]), "union", {"copies": 3, "of": "K3"}, gap_n=3)
    add("2C5", union_of_copies(5, 2, [1, 4]), "union", {"copies": 2, "of": "C5"}, gap_n=2)
    u = union_of_copies(3, 2, [1, 2])
    add("2K3-aut", (u[0], _aut(u[0])), "union", {"copies": 2, "of": "K3"}, gap_n=2)

    add("fattened-3-2", family_fattened_cycle(3, 2), "fattened-cycle",
        {"m": 3, "k": 2, "connection": SYMMETRISED})
    add("fattened-6-2", family_fattened_cycle(6, 2), "fattened-cycle",
        {"m": 6, "k": 2, "connection": SYMMETRISED})
    add("k2-product-3", family_k2_product(3), "k2-product", {"N": 3})
    add("k2-product-6", family_k2_product(6), "k2-product", {"N": 6})
    add("dihedral-product-3-3", family_dihedral_product(3, 3), "dihedral-product", {"N": 3, "n": 3})

    adjacent = [Perm.from_cycles(4, (0, 1)), Perm.from_cycles(4, (1, 2)), Perm.from_cycles(4, (2, 3))]
    add("S4-adjacent", symmetric_group_cayley(4, adjacent), "cayley", {"group": "S4", "gens": "adjacent"})
    star = [Perm.from_cycles(4, (0, k)) for k in (1, 2, 3)]
    add("S4-star", symmetric_group_cayley(4, star), "cayley", {"group": "S4", "gens": "star"})
    return out


def validate(inst: Instance) -> None:
    if inst.group.domain_size != inst.graph.num_vertices:
        raise CorpusError(f"{inst.name}: group and graph sizes differ")
    if not acts_by_automorphisms(inst.graph, inst.group):
        raise CorpusError(f"{inst.name}: group does not act by automorphisms")
    if not inst.vertex_transitive:
        raise CorpusError(f"{inst.name}: group is not vertex-transitive")


@lru_cache(maxsize=1)
def builtin_corpus() -> tuple[Instance, ...]:
    """Deterministic corpus; every instance is validated on construction."""
    items = tuple(_make())
    for inst in items:
        validate(inst)
    return items


def by_name(name: str) -> Instance:
    for inst in builtin_corpus():
        if inst.name == name:
            return inst
    raise KeyError(name)
