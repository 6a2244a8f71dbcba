"""Deliberately naive reference computations that share no code with the library."""

from fractions import Fraction
from itertools import product


def cycle_edges(m):
    return [(i, (i + 1) % m) for i in range(m)]


def complete_edges(k):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def neighbours(num, edges):
    nb = [set() for _ in range(num)]
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    return nb


def edge_cut(nb, s):
    return sum(1 for v in s for u in nb[v] if u not in s)


def sym_vertex_cut(nb, s):
    inner = sum(1 for v in s if nb[v] - s)
    outer = len({u for v in s for u in nb[v]} - s)
    return inner + outer


def brute(num, edges, n, kind):
    """Minimum over all labelings of the max part ratio; ``kind`` in h, iota, rho, iota_tilde."""
    nb = neighbours(num, edges)
    relaxed = kind in ("rho", "iota_tilde")
    labels = range(-1, n) if relaxed else range(n)
    cut = edge_cut if kind in ("h", "rho") else sym_vertex_cut
    best = None
    for lab in product(labels, repeat=num):
        parts = [{v for v in range(num) if lab[v] == i} for i in range(n)]
        if any(not p for p in parts):
            continue
        val = max(Fraction(cut(nb, p), len(p)) for p in parts)
        if best is None or val < best:
            best = val
    if kind == "rho":
        best /= len(nb[0])
    return best
