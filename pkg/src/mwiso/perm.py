"""Permutations, materialised permutation groups, and systems of imprimitivity.

Groups are small enough here to be stored element by element, so closure is a
plain breadth-first search and orbit/stabilizer/coset questions are answered
by scanning ``elements``. Composition is right-to-left: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from mwiso.graph import Graph, GraphParseError, VertexSet, iter_bits
from mwiso.partition import Partition, restricted_growth_strings

DEFAULT_CLOSURE_CAP = 1_000_000
DEFAULT_SUBGROUP_CAP = 240


class GroupError(ValueError):
    pass


class DomainMismatch(GroupError):
    pass


class GroupTooLarge(GroupError):
    pass


class NotTransitive(GroupError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection: {self.images}")

    @classmethod
    def of(cls, images: Iterable[int]) -> "Perm":
        return cls(tuple(int(x) for x in images))

    @classmethod
    def from_cycles(cls, size: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(size))
        for c in cycles:
            for a, b in zip(c, tuple(c[1:]) + (c[0],)):
                img[a] = b
        return cls(tuple(img))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def inverse(self) -> "Perm":
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def apply_mask(self, mask: int) -> int:
        out = 0
        for v in iter_bits(mask):
            out |= 1 << self.images[v]
        return out

    def __repr__(self) -> str:
        return f"Perm{self.images}"


def identity(k: int) -> Perm:
    return Perm(tuple(range(k)))


def compose(p: Perm, q: Perm) -> Perm:
    if p.size != q.size:
        raise DomainMismatch(f"sizes {p.size} and {q.size} differ")
    pi = p.images
    return Perm(tuple(pi[x] for x in q.images))


def inverse(p: Perm) -> Perm:
    inv = [0] * p.size
    for i, x in enumerate(p.images):
        inv[x] = i
    return Perm(tuple(inv))


def _closure(gens: Sequence[tuple[int, ...]], k: int, cap: int) -> set[tuple[int, ...]]:
    ident = tuple(range(k))
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = tuple(s[x] for x in g)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise GroupTooLarge(f"group order exceeds cap {cap}")
                queue.append(h)
    return seen


@dataclass(frozen=True, eq=False)
class PermGroup:
    domain_size: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    source: str = "generators"
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._index.update({p.images: i for i, p in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return isinstance(p, Perm) and p.images in self._index

    def index(self, p: Perm) -> int:
        return self._index[p.images]

    @property
    def identity_index(self) -> int:
        return self._index[tuple(range(self.domain_size))]

    def with_source(self, source: str) -> "PermGroup":
        return PermGroup(self.domain_size, self.generators, self.elements, source)


def generate_group(gens: Sequence[Perm], cap: int = DEFAULT_CLOSURE_CAP,
                   domain_size: int | None = None, source: str = "generators") -> PermGroup:
    gens = list(gens)
    if domain_size is None:
        if not gens:
            raise DomainMismatch("domain size needed for an empty generator list")
        domain_size = gens[0].size
    for s in gens:
        if s.size != domain_size:
            raise DomainMismatch(f"generator of size {s.size} on a domain of {domain_size}")
    elems = _closure([s.images for s in gens], domain_size, cap)
    return PermGroup(domain_size, tuple(gens), tuple(Perm(e) for e in sorted(elems)), source)


def group_from_elements(elements: Iterable[Perm], domain_size: int,
                        source: str = "elements") -> PermGroup:
    """Wrap a complete element list, choosing a small generating set greedily."""
    elems = sorted({p.images for p in elements})
    target = set(elems)
    gens: list[tuple[int, ...]] = []
    span = {tuple(range(domain_size))}
    for e in elems:
        if e not in span:
            gens.append(e)
            span = _closure(gens, domain_size, len(target))
    if span != target:
        raise GroupError("element list is not closed under composition")
    return PermGroup(domain_size, tuple(Perm(g) for g in gens), tuple(Perm(e) for e in elems), source)


# -- graph automorphisms ------------------------------------------------------

def is_automorphism(g: Graph, p: Perm) -> bool:
    if p.size != g.num_vertices:
        return False
    img = p.images
    for u, v in g.edges:
        if not g.has_edge(img[u], img[v]):
            return False
    return True


def _search_order(g: Graph) -> list[int]:
    order: list[int] = []
    seen = 0
    for start in range(g.num_vertices):
        if seen >> start & 1:
            continue
        seen |= 1 << start
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in g.adjacency[v]:
                if not seen >> u & 1:
                    seen |= 1 << u
                    queue.append(u)
    return order


def automorphism_group(g: Graph, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """All automorphisms, by backtracking over vertex images in BFS order.

    A partial map is extended by ``v -> w`` only if ``w`` has the degree of
    ``v`` and agrees with it on adjacency to every already-mapped vertex.
    """
    N = g.num_vertices
    order = _search_order(g)
    img = [-1] * N
    found: list[tuple[int, ...]] = []

    def rec(depth: int, mapped_src: int, mapped_dst: int) -> None:
        if depth == N:
            found.append(tuple(img))
            if len(found) > cap:
                raise GroupTooLarge(f"automorphism group exceeds cap {cap}")
            return
        v = order[depth]
        target = 0
        for u in iter_bits(g.adj_masks[v] & mapped_src):
            target |= 1 << img[u]
        dv = g.degree_sequence[v]
        for w in range(N):
            if mapped_dst >> w & 1 or g.degree_sequence[w] != dv:
                continue
            if g.adj_masks[w] & mapped_dst != target:
                continue
            img[v] = w
            rec(depth + 1, mapped_src | 1 << v, mapped_dst | 1 << w)
        img[v] = -1

    rec(0, 0, 0)
    auts = [Perm(a) for a in found]
    return group_from_elements(auts, N, source="aut")


def acts_by_automorphisms(g: Graph, gr: PermGroup) -> bool:
    return gr.domain_size == g.num_vertices and all(is_automorphism(g, s) for s in gr.generators)


# -- orbits -------------------------------------------------------------------

def orbit(gr: PermGroup, v: int) -> VertexSet:
    mask = 1 << v
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for s in gr.generators:
            y = s.images[x]
            if not mask >> y & 1:
                mask |= 1 << y
                queue.append(y)
    return VertexSet(mask)


def is_transitive(gr: PermGroup) -> bool:
    return orbit(gr, 0).cardinality == gr.domain_size


def stabilizer(gr: PermGroup, v: int) -> PermGroup:
    elems = [p for p in gr.elements if p.images[v] == v]
    return group_from_elements(elems, gr.domain_size, source=f"stab({v})")


def edge_orbits(g: Graph, gr: PermGroup) -> list[list[tuple[int, int]]]:
    """Orbits of the induced action on undirected edges."""
    remaining = set(g.edges)
    out = []
    while remaining:
        start = min(remaining)
        orb = {start}
        queue = deque([start])
        while queue:
            u, v = queue.popleft()
            for s in gr.generators:
                a, b = s.images[u], s.images[v]
                e = (a, b) if a < b else (b, a)
                if e not in orb:
                    orb.add(e)
                    queue.append(e)
        remaining -= orb
        out.append(sorted(orb))
    return out


# -- block systems --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class BlockSystem:
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "BlockSystem":
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def domain_size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def masks(self) -> list[int]:
        return [sum(1 << v for v in b) for b in self.blocks]

    def block_of(self, v: int) -> int:
        for i, b in enumerate(self.blocks):
            if v in b:
                return i
        raise KeyError(v)

    def as_partition(self) -> Partition:
        return Partition.from_blocks(self.domain_size, self.blocks)


def _block_masks(partition) -> list[int]:
    if isinstance(partition, Partition):
        return partition.masks()
    if isinstance(partition, BlockSystem):
        return partition.masks()
    return [sum(1 << v for v in b) for b in partition]


def is_block_system(gr: PermGroup, partition, all_elements: bool = False) -> bool:
    """True iff every generator (or every element) maps each block onto a block."""
    masks = _block_masks(partition)
    if any(m == 0 for m in masks):
        return False
    union = 0
    for m in masks:
        if union & m:
            return False
        union |= m
    if union != (1 << gr.domain_size) - 1:
        return False
    blockset = set(masks)
    perms = gr.elements if all_elements else gr.generators
    return all(s.apply_mask(m) in blockset for s in perms for m in masks)


def block_permutation(system: BlockSystem, p: Perm) -> tuple[int, ...]:
    """The permutation of block indices induced by ``p``."""
    masks = system.masks()
    where = {m: i for i, m in enumerate(masks)}
    return tuple(where[p.apply_mask(m)] for m in masks)


def minimal_block_system(gr: PermGroup, seed: Iterable[int]) -> BlockSystem:
    """Finest block system with all of ``seed`` in a single block (Atkinson's merge)."""
    N = gr.domain_size
    parent = list(range(N))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seed = list(seed)
    queue: deque[tuple[int, int]] = deque()
    for x in seed[1:]:
        a, b = find(seed[0]), find(x)
        if a != b:
            parent[max(a, b)] = min(a, b)
            queue.append((seed[0], x))
    while queue:
        a, b = queue.popleft()
        for s in gr.generators:
            ra, rb = find(s.images[a]), find(s.images[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                queue.append((s.images[a], s.images[b]))
    classes: dict[int, list[int]] = {}
    for v in range(N):
        classes.setdefault(find(v), []).append(v)
    return BlockSystem.of(classes.values())


def all_block_systems(gr: PermGroup) -> list[BlockSystem]:
    """Every block system of a transitive group, including the two trivial ones."""
    if not is_transitive(gr):
        raise NotTransitive("block systems are defined for transitive actions")
    N = gr.domain_size
    blocks_at_0: dict[tuple[int, ...], BlockSystem] = {}
    trivial = BlockSystem.of([v] for v in range(N))
    blocks_at_0[(0,)] = trivial
    frontier = []
    for w in range(1, N):
        sysm = minimal_block_system(gr, [0, w])
        key = sysm.blocks[0]
        if key not in blocks_at_0:
            blocks_at_0[key] = sysm
            frontier.append(key)
    # a block through 0 is the join of the minimal blocks of its pairs, so close under joins
    while frontier:
        new = []
        keys = list(blocks_at_0)
        for a in frontier:
            for b in keys:
                sysm = minimal_block_system(gr, sorted(set(a) | set(b)))
                key = sysm.blocks[0]
                if key not in blocks_at_0:
                    blocks_at_0[key] = sysm
                    new.append(key)
                    keys.append(key)
        frontier = new
    return [blocks_at_0[k] for k in sorted(blocks_at_0)]


def block_systems_of_size(gr: PermGroup, n: int) -> list[BlockSystem]:
    if not is_transitive(gr):
        raise NotTransitive("block systems are defined for transitive actions")
    if n < 1 or gr.domain_size % n:
        return []
    return [s for s in all_block_systems(gr) if s.block_count == n]


def block_systems_exhaustive(gr: PermGroup, n: int) -> list[BlockSystem]:
    """Reference answer: test every partition into ``n`` equal blocks."""
    N = gr.domain_size
    if n < 1 or N % n:
        return []
    out = []
    for labels in restricted_growth_strings(N, n):
        p = Partition(labels, n)
        if len(set(p.sizes())) == 1 and is_block_system(gr, p):
            out.append(BlockSystem.of(p.blocks()))
    return sorted(out)


# -- subgroups ------------------------------------------------------------------

class _Table:
    def __init__(self, gr: PermGroup):
        self.elems = [p.images for p in gr.elements]
        idx = {e: i for i, e in enumerate(self.elems)}
        self.e = idx[tuple(range(gr.domain_size))]
        self.mul = [[idx[tuple(a[x] for x in b)] for b in self.elems] for a in self.elems]

    def closure(self, gens: Sequence[int]) -> int:
        mask = 1 << self.e
        queue = deque([self.e])
        mul = self.mul
        while queue:
            x = queue.popleft()
            row = mul[x]
            for s in gens:
                y = row[s]
                if not mask >> y & 1:
                    mask |= 1 << y
                    queue.append(y)
        return mask


def subgroup_orders(gr: PermGroup, cap: int = DEFAULT_SUBGROUP_CAP,
                    stop_at_order: int | None = None) -> set[int]:
    """Orders of all subgroups, from cyclic subgroups closed under joins."""
    if gr.order > cap:
        raise GroupTooLarge(f"|G|={gr.order} exceeds subgroup-search cap {cap}")
    t = _Table(gr)
    cyclic: dict[int, int] = {}
    for i in range(gr.order):
        cyclic.setdefault(t.closure([i]), i)
    seen: dict[int, list[int]] = {1 << t.e: []}
    for mask, g in cyclic.items():
        seen.setdefault(mask, [g])
    orders = {bin(m).count("1") for m in seen}
    frontier = list(seen)
    while frontier and (stop_at_order is None or stop_at_order not in orders):
        new = []
        for h in frontier:
            for c, g in cyclic.items():
                if c & ~h == 0:
                    continue
                gens = seen[h] + [g]
                j = t.closure(gens)
                if j not in seen:
                    seen[j] = gens
                    orders.add(bin(j).count("1"))
                    new.append(j)
        frontier = new
    return orders


def has_subgroup_of_index(gr: PermGroup, n: int, cap: int = DEFAULT_SUBGROUP_CAP) -> bool:
    if gr.order > cap:
        raise GroupTooLarge(f"|G|={gr.order} exceeds subgroup-search cap {cap}")
    if n < 1 or gr.order % n:
        return False
    if n == 1 or n == gr.order:
        return True
    target = gr.order // n
    return target in subgroup_orders(gr, cap, stop_at_order=target)


# -- text format ------------------------------------------------------------------

def format_perms(perms: Iterable[Perm]) -> str:
    return "".join("perm " + " ".join(str(x) for x in p.images) + "\n" for p in perms)


def parse_perms(text: str) -> list[Perm]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "perm":
            raise GraphParseError(f"line {lineno}: expected 'perm ...', got {raw!r}")
        try:
            out.append(Perm.of(int(x) for x in tok[1:]))
        except ValueError as exc:
            raise GraphParseError(f"line {lineno}: {exc}") from None
    return out


def read_perms(path) -> list[Perm]:
    with open(path, encoding="utf-8") as fh:
        return parse_perms(fh.read())
