"""Laplacian spectra by cyclic Jacobi rotations, Rayleigh quotients, and threshold sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from mwiso.graph import Graph, VertexSet, vertex_boundary_all

JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


class SpectralError(ValueError):
    pass


class ConvergenceFailure(SpectralError):
    pass


class ZeroFunction(SpectralError):
    pass


class NOutOfRange(SpectralError):
    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]
    residual: float
    eigenvectors: np.ndarray | None = None

    def to_json(self) -> dict:
        return {"eigenvalues": [fmt_float(x) for x in self.eigenvalues],
                "residual": fmt_float(self.residual)}


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def laplacian(g: Graph) -> np.ndarray:
    N = g.num_vertices
    L = np.zeros((N, N), dtype=np.int64)
    for v, nb in enumerate(g.adjacency):
        L[v, v] = len(nb)
        for u in nb:
            L[v, u] = -1
    return L


def _off_norm(A: np.ndarray) -> float:
    # summed directly: ||A||^2 - ||diag||^2 cancels to zero long before convergence
    return math.sqrt(2.0 * float(np.sum(np.triu(A, 1) ** 2)))


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL,
                max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic-by-row Jacobi.

    Sweeps until the off-diagonal Frobenius norm drops below ``tol * ||A||_F``.
    Returns ``(w, V)`` with ``A @ V[:, k] ~= w[k] * V[:, k]`` and ``w`` ascending.
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T):
        raise SpectralError("matrix must be square and symmetric")
    V = np.eye(n)
    threshold = tol * np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = _off_norm(A)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with the rotation acting on rows/columns p, q
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        off = _off_norm(A)
        if off > threshold:
            raise ConvergenceFailure(f"off-diagonal norm {off:.3e} after {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigenvalues(g: Graph) -> Spectrum:
    L = laplacian(g)
    w, V = jacobi_eigh(L)
    residual = float(np.max(np.linalg.norm(L @ V - V * w, axis=0))) if len(w) else 0.0
    return Spectrum(tuple(float(x) for x in w), residual, V)


def lambda_n(spec: Spectrum, n: int) -> float:
    if not 1 <= n <= len(spec.eigenvalues):
        raise NOutOfRange(f"n={n} outside [1, {len(spec.eigenvalues)}]")
    return spec.eigenvalues[n - 1]


def rayleigh(g: Graph, f: Sequence[float]) -> float:
    """Sum over edges of (f(u) - f(v))^2 divided by sum of f(v)^2."""
    f = [float(x) for x in f]
    den = sum(x * x for x in f)
    if den == 0.0:
        raise ZeroFunction("Rayleigh quotient of the zero function")
    num = sum((f[u] - f[v]) ** 2 for u, v in g.edges)
    return num / den


def bht_bound(ratio: float | Fraction) -> float:
    """(sqrt(ratio + 1) - 1)^2, the right side of the threshold-set inequality."""
    return (math.sqrt(float(ratio) + 1.0) - 1.0) ** 2


@dataclass(frozen=True)
class SweepResult:
    subset: VertexSet
    ratio: Fraction
    slack: float


def bht_sweep(g: Graph, f: Sequence[float]) -> SweepResult:
    """Best threshold set {v : |f(v)| >= t} by |dS|/|S|, with the inequality slack.

    Slack is ``4 Ray(f) - (sqrt(ratio + 1) - 1)^2`` and must be non-negative.
    """
    ray = rayleigh(g, f)
    mags = [abs(float(x)) for x in f]
    levels = sorted({m for m in mags if m > 0.0}, reverse=True)
    best: tuple[Fraction, int] | None = None
    for t in levels:
        mask = 0
        for v, m in enumerate(mags):
            if m >= t:
                mask |= 1 << v
        r = Fraction(vertex_boundary_all(g, mask), bin(mask).count("1"))
        if best is None or r < best[0]:
            best = (r, mask)
    assert best is not None
    slack = 4.0 * ray - bht_bound(best[0])
    if slack < -1e-9:
        raise AssertionError(f"threshold-set inequality violated: slack {slack}")
    return SweepResult(VertexSet(best[1]), best[0], slack)
