"""Compiled branch-and-bound sweep; mirrors ``isoperimetry._Search`` step for step.

Adjacency comes in CSR form (``indptr``, ``indices``). The unused label of the
relaxed quantities is ``n`` internally. ``sweep`` returns the incumbent ratio
as ``(num, den)`` and rewrites ``best_labels`` in place when it improves.
Besides the per-part ratio bound, a node is cut when the remaining vertices
cannot grow every part to the least size whose ratio could still compete.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _assign(v, p, n, edge_mode, indptr, indices, part, size, bnd, cnt, asg):
    if edge_mode:
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if u < v:
                q = part[u]
                if q != p:
                    bnd[p] += 1
                    bnd[q] += 1
    else:
        if p != n and asg[v] - cnt[p, v] > 0:
            bnd[p] += 1
        for q in range(n):
            if q != p and cnt[q, v] > 0:
                bnd[q] += 1
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            q = part[u]
            if q != -1 and q != p:
                if q != n and asg[u] - cnt[q, u] == 0:
                    bnd[q] += 1
                if p != n and cnt[p, u] == 0:
                    bnd[p] += 1
            cnt[p, u] += 1
            asg[u] += 1
    part[v] = p
    size[p] += 1


@njit(cache=True)
def _unassign(v, p, n, edge_mode, indptr, indices, part, size, bnd, cnt, asg):
    part[v] = -1
    size[p] -= 1
    if edge_mode:
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if u < v:
                q = part[u]
                if q != p:
                    bnd[p] -= 1
                    bnd[q] -= 1
    else:
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            cnt[p, u] -= 1
            asg[u] -= 1
            q = part[u]
            if q != -1 and q != p:
                if q != n and asg[u] - cnt[q, u] == 0:
                    bnd[q] -= 1
                if p != n and cnt[p, u] == 0:
                    bnd[p] -= 1
        for q in range(n):
            if q != p and cnt[q, v] > 0:
                bnd[q] -= 1
        if p != n and asg[v] - cnt[p, v] > 0:
            bnd[p] -= 1


@njit(cache=True)
def min_size(edge_mode, mindeg, num, den, strict, cap):
    """Smallest part size whose ratio lower bound can still match (strict) or beat the incumbent."""
    for s in range(1, mindeg + 2):
        if edge_mode:
            lhs = max(0, mindeg - s + 1) * den
            rhs = num
        else:
            lhs = (mindeg + 1) * den if s <= mindeg else 0
            rhs = num * s
        if lhs < rhs or (strict and lhs == rhs):
            return s
    return cap


@njit(cache=True)
def sweep(indptr, indices, N, n, allow_unused, edge_mode, prefix,
          best_num, best_den, best_labels, strict, mindeg):
    part = np.full(N, -1, np.int64)
    size = np.zeros(n + 1, np.int64)
    bnd = np.zeros(n + 1, np.int64)
    cnt = np.zeros((n + 1, N), np.int64)
    asg = np.zeros(N, np.int64)
    used = 0
    P = prefix.shape[0]
    for v in range(P):
        p = prefix[v]
        if p == -1:
            p = n
        _assign(v, p, n, edge_mode, indptr, indices, part, size, bnd, cnt, asg)
        if p != n and p == used:
            used += 1

    used_at = np.zeros(N + 1, np.int64)
    nxt = np.zeros(N + 1, np.int64)
    depth = P
    used_at[depth] = used
    nxt[depth] = -1 if allow_unused else 0
    have_best = best_labels[0] != -2
    smin = min_size(edge_mode, mindeg, best_num, best_den, strict, N + 1)

    while depth >= P:
        if depth == N:
            if used_at[N] == n:
                num = 0
                den = 1
                for i in range(n):
                    if bnd[i] * den > num * size[i]:
                        num = bnd[i]
                        den = size[i]
                lhs = num * best_den
                rhs = best_num * den
                take = lhs < rhs
                if not take and lhs == rhs and strict:
                    if not have_best:
                        take = True
                    else:
                        for i in range(N):
                            a = part[i]
                            if a == n:
                                a = -1
                            if a != best_labels[i]:
                                take = a < best_labels[i]
                                break
                if take:
                    best_num = num
                    best_den = den
                    for i in range(N):
                        a = part[i]
                        best_labels[i] = -1 if a == n else a
                    have_best = True
                    strict = False
                    smin = min_size(edge_mode, mindeg, best_num, best_den, strict, N + 1)
            depth -= 1
            if depth >= P:
                _unassign(depth, part[depth], n, edge_mode, indptr, indices, part, size, bnd, cnt, asg)
            continue

        u0 = used_at[depth]
        lab = nxt[depth]
        limit = u0 + 1 if u0 + 1 < n else n
        if lab == -1:
            p = n
            nxt[depth] = 0
        elif lab < limit:
            p = lab
            nxt[depth] = lab + 1
        else:
            depth -= 1
            if depth >= P:
                _unassign(depth, part[depth], n, edge_mode, indptr, indices, part, size, bnd, cnt, asg)
            continue

        new_used = u0 + 1 if p != n and p == u0 else u0
        rem = N - depth - 1
        if new_used + rem < n:
            continue
        _assign(depth, p, n, edge_mode, indptr, indices, part, size, bnd, cnt, asg)
        prune = False
        for i in range(new_used):
            lhs = bnd[i] * best_den
            rhs = best_num * (size[i] + rem)
            if lhs > rhs or (lhs == rhs and not strict):
                prune = True
                break
        if not prune:
            need = (n - new_used) * smin
            for i in range(new_used):
                if size[i] < smin:
                    need += smin - size[i]
            prune = need > rem
        if prune:
            _unassign(depth, p, n, edge_mode, indptr, indices, part, size, bnd, cnt, asg)
            continue
        depth += 1
        used_at[depth] = new_used
        nxt[depth] = -1 if allow_unused else 0

    return best_num, best_den
