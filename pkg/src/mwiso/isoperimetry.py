"""Exact multi-way isoperimetric constants by branch-and-bound enumeration.

Four quantities are supported, all as exact :class:`fractions.Fraction`:

* ``H``          -- min over n-part partitions of max |dA_i| / |A_i| (edge boundary)
* ``IOTA``       -- same with the symmetric vertex boundary
* ``RHO``        -- min over n disjoint non-empty subsets (not necessarily
  covering V) of max |dS_i| / (d |S_i|); needs a regular graph
* ``IOTA_TILDE`` -- the disjoint-subset relaxation of ``IOTA``, no degree factor

The search assigns vertices ``0, 1, ...`` in order, labels forming a
restricted-growth string, so the first optimal leaf reached is the
lexicographically least minimiser. Partial assignments are pruned when some
part's committed boundary already forces its ratio above the incumbent.
"""

from __future__ import annotations

import enum
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from mwiso.graph import Graph, components, edge_boundary_all, iter_bits, vertex_boundary_all
from mwiso.partition import UNUSED, EmptyPart, Partition, restricted_growth_strings, stirling2

DEFAULT_BUDGET = 10**9


class Quantity(str, enum.Enum):
    H = "h"
    IOTA = "iota"
    RHO = "rho"
    IOTA_TILDE = "iota_tilde"

    @property
    def covers(self) -> bool:
        return self in (Quantity.H, Quantity.IOTA)

    @property
    def uses_edges(self) -> bool:
        return self in (Quantity.H, Quantity.RHO)


class IsoError(ValueError):
    pass


class NOutOfRange(IsoError):
    pass


class NotRegular(IsoError):
    pass


class EnumerationTooLarge(IsoError):
    pass


@dataclass(frozen=True)
class IsoResult:
    value: Fraction
    realizer: Partition
    quantity: Quantity
    n: int

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity.value,
            "n": self.n,
            "num": self.value.numerator,
            "den": self.value.denominator,
            "realizer": list(self.realizer.part_of),
        }


def partition_ratio(g: Graph, p: Partition, quantity: Quantity | str = Quantity.H) -> Fraction:
    """Max over parts of boundary/size; ``RHO`` includes the 1/d factor."""
    quantity = Quantity(quantity)
    if p.num_vertices != g.num_vertices:
        raise ValueError("partition and graph disagree on the vertex count")
    if quantity.covers and not p.covers:
        raise EmptyPart("a partition must cover every vertex")
    boundary = edge_boundary_all if quantity.uses_edges else vertex_boundary_all
    best = Fraction(0)
    for mask in p.masks():
        if not mask:
            raise EmptyPart("empty part")
        r = Fraction(boundary(g, mask), bin(mask).count("1"))
        if r > best:
            best = r
    if quantity is Quantity.RHO:
        best /= _degree(g)
    return best


def normalized(r: IsoResult | Fraction, d: int) -> Fraction:
    value = r.value if isinstance(r, IsoResult) else Fraction(r)
    if d < 1:
        raise ValueError("degree must be positive")
    return value / d


def _degree(g: Graph) -> int:
    if not g.regular_degree:
        raise NotRegular("quantity requires a regular graph of positive degree")
    return g.regular_degree


def search_size(num_vertices: int, n: int, quantity: Quantity) -> int:
    """Size of the unpruned search space the guard is applied to."""
    if quantity.covers:
        return stirling2(num_vertices, n)
    return (n + 1) ** num_vertices


def _check_n(g: Graph, n: int) -> None:
    if not 1 <= n <= g.num_vertices:
        raise NOutOfRange(f"n={n} outside [1, {g.num_vertices}]")


# -- seeds ------------------------------------------------------------------

def _bfs_order(g: Graph) -> list[int]:
    order: list[int] = []
    for comp in components(g):
        start = min(comp)
        seen = {start}
        frontier = [start]
        while frontier:
            order.extend(frontier)
            nxt = []
            for v in frontier:
                for u in g.adjacency[v]:
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
    return order


def _chunked(order: list[int], n: int, num_vertices: int) -> Partition:
    labels = [0] * num_vertices
    size, extra = divmod(len(order), n)
    pos = 0
    for i in range(n):
        k = size + (i < extra)
        for v in order[pos:pos + k]:
            labels[v] = i
        pos += k
    return Partition(tuple(labels), n).canonical()


def _component_seed(g: Graph, n: int) -> Partition | None:
    comps = components(g)
    if len(comps) < n:
        return None
    labels = [0] * g.num_vertices
    for i, comp in enumerate(comps):
        for v in comp:
            labels[v] = min(i, n - 1)
    return Partition(tuple(labels), n).canonical()


def _local_improve(g: Graph, p: Partition, quantity: Quantity) -> tuple[Fraction, Partition]:
    """Single-vertex moves while they strictly lower the ratio."""
    best = partition_ratio(g, p, quantity)
    labels = list(p.part_of)
    choices = list(range(p.n)) + ([] if quantity.covers else [UNUSED])
    improved = True
    while improved:
        improved = False
        for v in range(g.num_vertices):
            old = labels[v]
            for q in choices:
                if q == old:
                    continue
                labels[v] = q
                try:
                    cand = Partition(tuple(labels), p.n)
                except EmptyPart:
                    continue
                r = partition_ratio(g, cand, quantity)
                if r < best:
                    best, old, improved = r, q, True
            labels[v] = old
    return best, Partition(tuple(labels), p.n).canonical()


def _seed(g: Graph, n: int, quantity: Quantity) -> tuple[Fraction, Partition]:
    cands = []
    comp = _component_seed(g, n)
    if comp is not None:
        cands.append(comp)
    cands.append(_chunked(_bfs_order(g), n, g.num_vertices))
    cands.append(_chunked(list(range(g.num_vertices)), n, g.num_vertices))
    results = [_local_improve(g, c, quantity) for c in cands]
    return min(results, key=lambda t: (t[0], t[1].part_of))


# -- branch and bound -------------------------------------------------------

class _Search:
    """One depth-first sweep over the completions of a fixed label prefix.

    Internally the "unused" label of the relaxed quantities is ``n`` so that
    per-part arrays can be indexed directly; it is tried before every real
    label, matching the ordering ``-1 < 0 < 1 < ...`` of the public encoding.
    """

    def __init__(self, g: Graph, n: int, quantity: Quantity, best_num: int, best_den: int,
                 best_labels: tuple[int, ...] | None, seeded: bool):
        self.g = g
        self.n = n
        self.N = g.num_vertices
        self.allow_unused = not quantity.covers
        self.edge_mode = quantity.uses_edges
        self.lower = [tuple(u for u in g.adjacency[v] if u < v) for v in range(self.N)]
        self.best_num = best_num
        self.best_den = best_den
        self.best_labels = best_labels
        # a seeded incumbent may be lexicographically beaten by an equal leaf
        self.strict = seeded
        self.leaves = 0
        self.mindeg = min((len(nb) for nb in g.adjacency), default=0)
        self.smin = self._min_size()

    def _min_size(self) -> int:
        """Least part size whose ratio lower bound can still compete with the incumbent.

        A set of ``s`` vertices has at least ``s(d - s + 1)`` boundary edges, and
        for ``s <= d`` every member plus at least ``d - s + 1`` outside vertices
        lie on its vertex boundary (``d`` the minimum degree).
        """
        d, num, den = self.mindeg, self.best_num, self.best_den
        for s in range(1, d + 2):
            if self.edge_mode:
                lhs, rhs = max(0, d - s + 1) * den, num
            else:
                lhs, rhs = ((d + 1) * den if s <= d else 0), num * s
            if lhs < rhs or (self.strict and lhs == rhs):
                return s
        return self.N + 1

    def run(self, prefix: tuple[int, ...]) -> None:
        n, N = self.n, self.N
        self.part = [-1] * N
        self.size = [0] * (n + 1)
        if self.edge_mode:
            self.cross = [0] * (n + 1)
        else:
            self.cnt = [[0] * N for _ in range(n + 1)]
            self.asg = [0] * N
            self.bnd = [0] * (n + 1)
        used = 0
        for v, lab in enumerate(prefix):
            p = n if lab == UNUSED else lab
            if p != n and p > used:
                raise ValueError("prefix is not a restricted-growth string")
            self._assign(v, p)
            if p != n and p == used:
                used += 1
        self._rec(len(prefix), used)

    def _assign(self, v: int, p: int) -> None:
        n = self.n
        part = self.part
        if self.edge_mode:
            cross = self.cross
            for u in self.lower[v]:
                q = part[u]
                if q != p:
                    cross[p] += 1
                    cross[q] += 1
        else:
            cnt, asg, bnd = self.cnt, self.asg, self.bnd
            if p != n and asg[v] - cnt[p][v] > 0:
                bnd[p] += 1
            for q in range(n):
                if q != p and cnt[q][v] > 0:
                    bnd[q] += 1
            for u in self.g.adjacency[v]:
                q = part[u]
                if q != -1 and q != p:
                    if q != n and asg[u] - cnt[q][u] == 0:
                        bnd[q] += 1
                    if p != n and cnt[p][u] == 0:
                        bnd[p] += 1
                cnt[p][u] += 1
                asg[u] += 1
        part[v] = p
        self.size[p] += 1

    def _unassign(self, v: int, p: int) -> None:
        n = self.n
        part = self.part
        part[v] = -1
        self.size[p] -= 1
        if self.edge_mode:
            cross = self.cross
            for u in self.lower[v]:
                q = part[u]
                if q != p:
                    cross[p] -= 1
                    cross[q] -= 1
        else:
            cnt, asg, bnd = self.cnt, self.asg, self.bnd
            for u in self.g.adjacency[v]:
                cnt[p][u] -= 1
                asg[u] -= 1
                q = part[u]
                if q != -1 and q != p:
                    if q != n and asg[u] - cnt[q][u] == 0:
                        bnd[q] -= 1
                    if p != n and cnt[p][u] == 0:
                        bnd[p] -= 1
            for q in range(n):
                if q != p and cnt[q][v] > 0:
                    bnd[q] -= 1
            if p != n and asg[v] - cnt[p][v] > 0:
                bnd[p] -= 1

    def _rec(self, v: int, used: int) -> None:
        n, N = self.n, self.N
        size = self.size
        bnd = self.cross if self.edge_mode else self.bnd
        if v == N:
            if used < n:
                return
            self.leaves += 1
            num, den = 0, 1
            for i in range(n):
                if bnd[i] * den > num * size[i]:
                    num, den = bnd[i], size[i]
            lhs, rhs = num * self.best_den, self.best_num * den
            if lhs < rhs or (lhs == rhs and self.strict
                             and (self.best_labels is None or self._labels() < self.best_labels)):
                self.best_num, self.best_den = num, den
                self.best_labels = self._labels()
                self.strict = False
                self.smin = self._min_size()
            return
        rem = N - v - 1
        labels = range(min(used + 1, n))
        if self.allow_unused:
            labels = itertools.chain((n,), labels)
        for p in labels:
            new_used = used + 1 if p != n and p == used else used
            if new_used + rem < n:
                continue
            self._assign(v, p)
            bn, bd = self.best_num, self.best_den
            prune = False
            for i in range(new_used):
                lhs = bnd[i] * bd
                rhs = bn * (size[i] + rem)
                if lhs > rhs or (lhs == rhs and not self.strict):
                    prune = True
                    break
            if not prune:
                smin = self.smin
                need = (n - new_used) * smin + sum(smin - size[i] for i in range(new_used)
                                                   if size[i] < smin)
                prune = need > rem
            if not prune:
                self._rec(v + 1, new_used)
            self._unassign(v, p)

    def _labels(self) -> tuple[int, ...]:
        n = self.n
        return tuple(UNUSED if p == n else p for p in self.part)


def _prefixes(N: int, n: int, allow_unused: bool, length: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], used: int) -> None:
        if used + (N - len(prefix)) < n:
            return
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        labels = ([UNUSED] if allow_unused else []) + list(range(min(used + 1, n)))
        for p in labels:
            rec(prefix + [p], used + 1 if p == used else used)

    rec([], 0)
    return out


def _run_chunk(args) -> tuple[int, int, tuple[int, ...] | None]:
    g, n, quantity, bnum, bden, blabels, prefix, compiled = args
    if compiled:
        return _run_compiled(g, n, quantity, bnum, bden, blabels, prefix)
    s = _Search(g, n, quantity, bnum, bden, blabels, seeded=True)
    s.run(prefix)
    return s.best_num, s.best_den, s.best_labels


def _run_compiled(g, n, quantity, bnum, bden, blabels, prefix):
    import numpy as np

    from mwiso import _kernel

    indptr = np.zeros(g.num_vertices + 1, np.int64)
    for v, nb in enumerate(g.adjacency):
        indptr[v + 1] = indptr[v] + len(nb)
    indices = np.array([u for nb in g.adjacency for u in nb], dtype=np.int64)
    labels = np.array(blabels, dtype=np.int64)
    num, den = _kernel.sweep(indptr, indices, g.num_vertices, n, not quantity.covers,
                             quantity.uses_edges, np.array(prefix, dtype=np.int64),
                             bnum, bden, labels, True,
                             min((len(nb) for nb in g.adjacency), default=0))
    return int(num), int(den), tuple(int(x) for x in labels)


def _have_numba() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return os.environ.get("MWISO_PURE_PYTHON", "") == ""


def default_workers() -> int:
    env = os.environ.get("MWISO_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _minimize(g: Graph, n: int, quantity: Quantity, budget: int, workers: int,
              compiled: bool | None = None) -> IsoResult:
    _check_n(g, n)
    if quantity is Quantity.RHO:
        _degree(g)
    N = g.num_vertices
    if n == 1 and quantity.covers:
        return IsoResult(Fraction(0), Partition((0,) * N, 1), quantity, 1)
    size = search_size(N, n, quantity)
    if size > budget:
        raise EnumerationTooLarge(
            f"{quantity.value}_{n} on {N} vertices: search space {size} exceeds budget {budget}")

    seed_value, seed = _seed(g, n, quantity)
    # RHO is compared on the un-normalised ratio; the 1/d factor is applied last
    scale = _degree(g) if quantity is Quantity.RHO else 1
    raw = seed_value * scale
    bnum, bden = raw.numerator, raw.denominator

    if workers <= 1:
        chunks = [()]
    else:
        length = 1
        while length < N and len(_prefixes(N, n, not quantity.covers, length)) < 4 * workers:
            length += 1
        chunks = _prefixes(N, n, not quantity.covers, length)

    if compiled is None:
        compiled = _have_numba()
    tasks = [(g, n, quantity, bnum, bden, seed.part_of, c, compiled) for c in chunks]
    if workers <= 1 or len(tasks) == 1:
        results = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, tasks))

    # merge on (value, labels): independent of chunk scheduling
    best = min(results, key=lambda r: (Fraction(r[0], r[1]), r[2]))
    value = Fraction(best[0], best[1]) / scale
    realizer = Partition(best[2], n)
    return IsoResult(value, realizer, quantity, n)


@lru_cache(maxsize=4096)
def _cached(g: Graph, n: int, quantity: Quantity, budget: int) -> IsoResult:
    return _minimize(g, n, quantity, budget, default_workers())


def minimize(g: Graph, n: int, quantity: Quantity | str, budget: int = DEFAULT_BUDGET,
             workers: int | None = None, compiled: bool | None = None) -> IsoResult:
    """Exact minimum of ``quantity`` with its lexicographically least realizer.

    ``workers`` splits the search over label prefixes (default: cached,
    ``MWISO_THREADS`` workers); ``compiled`` selects the numba kernel or the
    pure-Python sweep (default: numba when importable).
    """
    quantity = Quantity(quantity)
    if workers is None and compiled is None:
        return _cached(g, n, quantity, budget)
    return _minimize(g, n, quantity, budget, workers or default_workers(), compiled)


def h_n(g: Graph, n: int, budget: int = DEFAULT_BUDGET) -> IsoResult:
    return minimize(g, n, Quantity.H, budget)


def iota_n(g: Graph, n: int, budget: int = DEFAULT_BUDGET) -> IsoResult:
    return minimize(g, n, Quantity.IOTA, budget)


def rho_n(g: Graph, n: int, budget: int = DEFAULT_BUDGET) -> IsoResult:
    return minimize(g, n, Quantity.RHO, budget)


def iota_tilde_n(g: Graph, n: int, budget: int = DEFAULT_BUDGET) -> IsoResult:
    return minimize(g, n, Quantity.IOTA_TILDE, budget)


# -- unpruned reference enumeration -----------------------------------------

def _collections(N: int, n: int) -> Iterator[tuple[int, ...]]:
    for labels in itertools.product(range(-1, n), repeat=N):
        seen: list[int] = []
        ok = True
        for x in labels:
            if x != UNUSED and x not in seen:
                if x != len(seen):
                    ok = False
                    break
                seen.append(x)
        if ok and len(seen) == n:
            yield labels


def exhaustive(g: Graph, n: int, quantity: Quantity | str) -> IsoResult:
    """Plain enumeration of every candidate; the reference the search is tested against."""
    quantity = Quantity(quantity)
    _check_n(g, n)
    N = g.num_vertices
    space = restricted_growth_strings(N, n) if quantity.covers else _collections(N, n)
    best: tuple[Fraction, tuple[int, ...]] | None = None
    for labels in space:
        r = partition_ratio(g, Partition(labels, n), quantity)
        if best is None or r < best[0]:
            best = (r, labels)
    assert best is not None
    return IsoResult(best[0], Partition(best[1], n), quantity, n)


def realizer_masks(r: IsoResult) -> list[int]:
    return r.realizer.masks()


def members(mask: int) -> list[int]:
    return list(iter_bits(mask))
