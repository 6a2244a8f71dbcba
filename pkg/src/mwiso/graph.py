"""Simple undirected graphs and the edge / symmetric vertex boundary operators.

Vertex subsets are bitmasks (Python ints); bit ``v`` set means vertex ``v``
is a member. :class:`VertexSet` wraps a mask for the public API, but every
function here also accepts a raw mask or any iterable of vertex indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

MAX_VERTICES = 128


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class NotDisjoint(GraphError):
    pass


class GraphTooLarge(GraphError):
    pass


class GraphParseError(GraphError):
    pass


@dataclass(frozen=True)
class VertexSet:
    mask: int

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(to_mask(vertices))

    @property
    def cardinality(self) -> int:
        return popcount(self.mask)

    def __len__(self) -> int:
        return self.cardinality

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self.mask >> v & 1)

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self)})"


SetLike = Union[VertexSet, int, Iterable[int]]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(a: SetLike) -> int:
    if isinstance(a, VertexSet):
        return a.mask
    if isinstance(a, int):
        return a
    m = 0
    for v in a:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    adjacency: tuple[tuple[int, ...], ...]
    degree_sequence: tuple[int, ...] = field(compare=False)
    regular_degree: int | None = field(compare=False)
    adj_masks: tuple[int, ...] = field(compare=False, repr=False)

    @property
    def full_mask(self) -> int:
        return (1 << self.num_vertices) - 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_vertices) for v in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(self.degree_sequence) // 2

    @property
    def is_regular(self) -> bool:
        return self.regular_degree is not None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_masks[u] >> v & 1)

    def neighborhood(self, a: SetLike) -> int:
        """Mask of all vertices adjacent to some member of ``a``."""
        out = 0
        for v in iter_bits(to_mask(a)):
            out |= self.adj_masks[v]
        return out

    def __str__(self) -> str:
        return f"Graph(|V|={self.num_vertices}, |E|={self.num_edges})"


def new_graph(num_vertices: int, edges: Iterable[Sequence[int]]) -> Graph:
    if num_vertices < 1:
        raise GraphError("a graph needs at least one vertex")
    if num_vertices > MAX_VERTICES:
        raise GraphTooLarge(f"{num_vertices} vertices exceeds the cap of {MAX_VERTICES}")
    masks = [0] * num_vertices
    for e in edges:
        u, v = int(e[0]), int(e[1])
        for x in (u, v):
            if not 0 <= x < num_vertices:
                raise VertexOutOfRange(f"vertex {x} not in [0, {num_vertices})")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    adjacency = tuple(tuple(iter_bits(m)) for m in masks)
    degrees = tuple(len(nb) for nb in adjacency)
    regular = degrees[0] if len(set(degrees)) == 1 else None
    return Graph(num_vertices, adjacency, degrees, regular, tuple(masks))


def _check_disjoint(a: int, b: int) -> None:
    if a & b:
        raise NotDisjoint(f"sets share vertices {sorted(iter_bits(a & b))}")


def edge_boundary(g: Graph, a: SetLike, b: SetLike) -> int:
    """Number of edges with one endpoint in ``a`` and the other in ``b``."""
    am, bm = to_mask(a), to_mask(b)
    _check_disjoint(am, bm)
    if popcount(am) > popcount(bm):
        am, bm = bm, am
    return sum(popcount(g.adj_masks[v] & bm) for v in iter_bits(am))


def edge_boundary_all(g: Graph, a: SetLike) -> int:
    am = to_mask(a) & g.full_mask
    return edge_boundary(g, am, g.full_mask & ~am)


def vertex_boundary(g: Graph, a: SetLike, b: SetLike) -> int:
    """Size of the symmetric vertex boundary: boundary vertices on both sides."""
    am, bm = to_mask(a), to_mask(b)
    _check_disjoint(am, bm)
    return popcount(g.neighborhood(bm) & am) + popcount(g.neighborhood(am) & bm)


def vertex_boundary_all(g: Graph, a: SetLike) -> int:
    am = to_mask(a) & g.full_mask
    return vertex_boundary(g, am, g.full_mask & ~am)


def components(g: Graph) -> list[VertexSet]:
    seen = 0
    out = []
    for start in range(g.num_vertices):
        if seen >> start & 1:
            continue
        comp = 1 << start
        queue = deque([start])
        while queue:
            v = queue.popleft()
            fresh = g.adj_masks[v] & ~comp
            comp |= fresh
            queue.extend(iter_bits(fresh))
        seen |= comp
        out.append(VertexSet(comp))
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def relabel_graph(g: Graph, relabel: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed to ``relabel[v]``."""
    return new_graph(g.num_vertices, [(relabel[u], relabel[v]) for u, v in g.edges])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges)
        offset += h.num_vertices
    return new_graph(offset, edges)


# -- text format ------------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"graph {g.num_vertices}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    num_vertices = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "graph" and len(tok) == 2:
                if num_vertices is not None:
                    raise GraphParseError(f"line {lineno}: duplicate header")
                num_vertices = int(tok[1])
            elif tok[0] == "e" and len(tok) == 3:
                edges.append((int(tok[1]), int(tok[2])))
            else:
                raise GraphParseError(f"line {lineno}: unrecognised line {raw!r}")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphParseError(f"line {lineno}: {exc}") from None
    if num_vertices is None:
        raise GraphParseError("missing 'graph <num_vertices>' header")
    return new_graph(num_vertices, edges)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
