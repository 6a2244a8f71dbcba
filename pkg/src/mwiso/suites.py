"""Verification suites: every inequality the library knows how to check, as CheckReports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from mwiso.cayley import dihedral_product_split, family_complete, k2_product_split
from mwiso.corpus import Instance
from mwiso.graph import components, is_connected
from mwiso.imprimitivity import (
    build_certificate,
    edge_transitive_check,
    hall_condition_exhaustive,
    hall_matching,
    main_theorem_check,
)
from mwiso.isoperimetry import DEFAULT_BUDGET, EnumerationTooLarge, Quantity, minimize, partition_ratio
from mwiso.perm import GroupTooLarge, edge_orbits
from mwiso.phi import (
    GapInstance,
    Mode,
    assert_l_equals_n,
    build_gap_instance,
    build_phi,
    key_lemma_check,
    weak_imprimitivity_bound,
)
from mwiso.report import (
    CheckReport,
    Status,
    exact_le,
    float_le,
    repro_bundle,
    status_of,
    sub,
)
from mwiso.spectral import bht_bound, bht_sweep, eigenvalues

SUITES = ("basic", "cheeger", "main", "imprimitivity", "edge-transitive", "counterexample")
SPECTRAL_RESIDUAL = 1e-8
TRACE_TOL = 1e-6


@dataclass
class Context:
    inst: Instance
    n_lo: int
    n_hi: int
    budget: int = DEFAULT_BUDGET
    _spec: object = field(default=None, repr=False)

    @property
    def g(self):
        return self.inst.graph

    def ns(self) -> range:
        return range(max(2, self.n_lo), min(self.n_hi, self.g.num_vertices - 1) + 1)

    def value(self, n: int, q: Quantity | str) -> Fraction:
        return minimize(self.g, n, q, self.budget).value

    def spectrum(self):
        if self._spec is None:
            self._spec = eigenvalues(self.g)
        return self._spec

    def lam(self, n: int) -> float:
        return self.spectrum().eigenvalues[n - 1]

    def where(self, n: int | None = None, **extra) -> dict:
        out = self.inst.describe()
        if n is not None:
            out["n"] = n
        out.update(extra)
        return out


def _guarded(ctx: Context, check_id: str, where: dict,
             fn: Callable[[], CheckReport]) -> CheckReport:
    """Scale guards become SKIPPED_SCALE; anything else unexpected becomes a FAIL with a bundle."""
    try:
        return fn()
    except (EnumerationTooLarge, GroupTooLarge) as e:
        return CheckReport(check_id, where, Status.SKIPPED_SCALE, details={"reason": str(e)})
    except Exception as e:  # noqa: BLE001 - reported, never swallowed
        return CheckReport(check_id, where, Status.FAIL,
                           details={"error": type(e).__name__, "message": str(e)},
                           bundle=repro_bundle(ctx.g, ctx.inst.group, **where))


def _exact(check_id: str, where: dict, lhs, rhs) -> CheckReport:
    ok, slack = exact_le(lhs, rhs)
    return CheckReport(check_id, where, status_of(ok), lhs, rhs, slack)


def _float(check_id: str, where: dict, lhs, rhs) -> CheckReport:
    ok, slack = float_le(lhs, rhs)
    return CheckReport(check_id, where, status_of(ok), float(lhs), float(rhs), slack,
                       {"tolerance": 1e-7})


def _both(check_id: str, where: dict, pairs: dict[str, tuple], exact: bool = True) -> CheckReport:
    checks = {}
    for name, (lhs, rhs) in pairs.items():
        ok, slack = exact_le(lhs, rhs) if exact else float_le(lhs, rhs)
        if not exact:
            lhs, rhs = float(lhs), float(rhs)
        checks[name] = sub(lhs, rhs, ok, slack)
    first = next(iter(checks.values()))
    status = status_of(all(c["ok"] for c in checks.values()))
    return CheckReport(check_id, where, status, first["lhs"], first["rhs"], first["slack"],
                       {"checks": checks})


def _with_bundle(ctx: Context, r: CheckReport) -> CheckReport:
    if r.failed and r.bundle is None:
        r.bundle = repro_bundle(ctx.g, ctx.inst.group, **r.instance)
    return r


# -- basic ------------------------------------------------------------------------

def basic(ctx: Context) -> Iterator[CheckReport]:
    g = ctx.g
    d = g.regular_degree
    if not d:
        yield CheckReport("basic", ctx.where(), Status.NOT_APPLICABLE,
                          details={"reason": "graph is not regular of positive degree"})
        return
    ncomp = len(components(g))
    for n in ctx.ns():
        w = ctx.where(n)
        yield _guarded(ctx, "basic.monotone-h", w,
                       lambda: _exact("basic.monotone-h", w, ctx.value(n, "h"), ctx.value(n + 1, "h")))
        yield _guarded(ctx, "basic.monotone-iota", w,
                       lambda: _exact("basic.monotone-iota", w, ctx.value(n, "iota"),
                                      ctx.value(n + 1, "iota")))
        yield _guarded(ctx, "basic.monotone-lambda", w,
                       lambda: _float("basic.monotone-lambda", w, ctx.lam(n), ctx.lam(n + 1)))

        def h_iota():
            h, io = ctx.value(n, "h"), ctx.value(n, "iota")
            return _both("basic.h-iota-sandwich", w, {"lower": (2 * h / d, io), "upper": (io, 2 * h)})

        yield _guarded(ctx, "basic.h-iota-sandwich", w, h_iota)

        def rho():
            r, hp = ctx.value(n, "rho"), ctx.value(n, "h") / d
            return _both("basic.rho-sandwich", w, {"lower": (r, hp), "upper": (hp, n * r)})

        yield _guarded(ctx, "basic.rho-sandwich", w, rho)

        def tilde():
            t, io = ctx.value(n, "iota_tilde"), ctx.value(n, "iota")
            return _both("basic.iota-tilde-sandwich", w, {"lower": (t, io), "upper": (io, n * t)})

        yield _guarded(ctx, "basic.iota-tilde-sandwich", w, tilde)

        def realizers():
            checks = {}
            for q in Quantity:
                try:
                    res = minimize(g, n, q, ctx.budget)
                except EnumerationTooLarge:
                    continue
                again = partition_ratio(g, res.realizer, q)
                checks[q.value] = sub(again, res.value, again == res.value, res.value - again)
            status = status_of(all(c["ok"] for c in checks.values()))
            return CheckReport("basic.realizer", w, status, details={"checks": checks})

        yield _guarded(ctx, "basic.realizer", w, realizers)

        def zero():
            h = ctx.value(n, "h")
            ok = (h == 0) == (ncomp >= n)
            return CheckReport("basic.zero-iff-components", w, status_of(ok), h, ncomp,
                               details={"components": ncomp})

        yield _guarded(ctx, "basic.zero-iff-components", w, zero)


# -- cheeger ------------------------------------------------------------------------

def cheeger(ctx: Context) -> Iterator[CheckReport]:
    g = ctx.g
    d = g.regular_degree
    if not d:
        yield CheckReport("cheeger", ctx.where(), Status.NOT_APPLICABLE,
                          details={"reason": "graph is not regular of positive degree"})
        return
    w0 = ctx.where()

    def sanity():
        spec = ctx.spectrum()
        trace = sum(spec.eigenvalues)
        deg = sum(len(nb) for nb in g.adjacency)
        checks = {
            "residual": sub(spec.residual, SPECTRAL_RESIDUAL, spec.residual < SPECTRAL_RESIDUAL,
                            SPECTRAL_RESIDUAL - spec.residual),
            "trace": sub(abs(trace - deg), TRACE_TOL, abs(trace - deg) < TRACE_TOL,
                         TRACE_TOL - abs(trace - deg)),
            "lambda1": sub(abs(spec.eigenvalues[0]), 1e-7, abs(spec.eigenvalues[0]) < 1e-7,
                           1e-7 - abs(spec.eigenvalues[0])),
        }
        return CheckReport("cheeger.spectrum", w0, status_of(all(c["ok"] for c in checks.values())),
                           details={"checks": checks, "spectrum": spec})

    yield _guarded(ctx, "cheeger.spectrum", w0, sanity)

    if is_connected(g):
        def alon_milman():
            lam2, h2 = ctx.lam(2), ctx.value(2, "h")
            upper = math.sqrt(2 * d) * math.sqrt(max(lam2, 0.0))
            return _both("cheeger.alon-milman", ctx.where(2),
                         {"lower": (lam2 / 2, h2), "upper": (h2, upper)}, exact=False)

        yield _guarded(ctx, "cheeger.alon-milman", ctx.where(2), alon_milman)

    def bht():
        lam2, i2 = ctx.lam(2), ctx.value(2, "iota")
        return _float("cheeger.bht", ctx.where(2), bht_bound(i2) / 4, lam2)

    yield _guarded(ctx, "cheeger.bht", ctx.where(2), bht)

    def sweep():
        spec = ctx.spectrum()
        f = [float(x) for x in spec.eigenvectors[:, 1]]
        if max(abs(x) for x in f) < 1e-12:
            f = [1.0] + [0.0] * (g.num_vertices - 1)
        res = bht_sweep(g, f)
        ok = res.slack >= -1e-9
        return CheckReport("cheeger.bht-sweep", ctx.where(2), status_of(ok), res.slack, 0.0,
                           res.slack, {"ratio": res.ratio, "subset": list(res.subset)})

    yield _guarded(ctx, "cheeger.bht-sweep", ctx.where(2), sweep)

    for n in ctx.ns():
        w = ctx.where(n)

        def lgt():
            lam_n, r = ctx.lam(n), ctx.value(n, "rho")
            rep = _float("cheeger.lgt-lower", w, lam_n / d / 2, r)
            try:
                t = ctx.value(n, "iota_tilde")
                b = bht_bound(t)
                rep.details["lambda_over_tilde_bound"] = lam_n / b if b > 0 else None
            except EnumerationTooLarge:
                pass
            return rep

        yield _guarded(ctx, "cheeger.lgt-lower", w, lgt)
        yield _guarded(ctx, "cheeger.half-lambda-h", w,
                       lambda: _float("cheeger.half-lambda-h", w, ctx.lam(n) / 2, ctx.value(n, "h")))


# -- main ---------------------------------------------------------------------------

def _needs_connected(ctx: Context, check_id: str) -> CheckReport | None:
    if not is_connected(ctx.g):
        return CheckReport(check_id, ctx.where(), Status.NOT_APPLICABLE,
                           details={"reason": "graph is not connected"})
    return None


def main(ctx: Context) -> Iterator[CheckReport]:
    na = _needs_connected(ctx, "main")
    if na:
        yield na
        return
    for n in ctx.ns():
        for mode in Mode:
            w = ctx.where(n, mode=mode.value)
            yield _guarded(ctx, f"main-{mode.value}", w,
                           lambda: main_theorem_check(ctx.g, ctx.inst.group, n, mode, ctx.budget))


# -- imprimitivity -----------------------------------------------------------------------

def _gap_reports(ctx: Context, inst: GapInstance, w: dict) -> Iterator[CheckReport]:
    phi = build_phi(inst)
    yield CheckReport("imprimitivity.phi", w, Status.PASS, phi.closeness_max, phi.closeness_bound,
                      phi.closeness_bound - phi.closeness_max,
                      {"phi": phi, "induced_transitive": phi.induced_transitive})
    lrep = assert_l_equals_n(phi, inst)
    lrep.instance = w
    yield lrep
    if not lrep.passed:
        return
    cert = build_certificate(inst, phi)
    realizer_blocks = sorted(tuple(b) for b in inst.partition.blocks())
    details = {"certificate": cert, "blocks_equal_components": None,
               "l1": cert.details.get("l1"), "two_sided_gap": cert.details.get("two_sided_gap"),
               "realizer_is_block_system": sorted(cert.blocks.blocks) == realizer_blocks}
    if inst.h_n == 0:
        comps = sorted(tuple(c) for c in components(ctx.g))
        details["blocks_equal_components"] = sorted(cert.blocks.blocks) == comps
    ok = cert.ok and details["blocks_equal_components"] is not False
    yield _with_bundle(ctx, CheckReport("imprimitivity.certificate", w, status_of(ok),
                                        max(cert.sym_diffs), cert.bound,
                                        cert.bound - max(cert.sym_diffs), details))
    if is_connected(ctx.g):
        for i, block in enumerate(cert.blocks.blocks):
            match = hall_matching(ctx.g, cert.blocks, i)
            hall = hall_condition_exhaustive(ctx.g, cert.blocks, i) if len(block) <= 12 else None
            ok = len(match) == len(block) and hall is not False
            yield _with_bundle(ctx, CheckReport("imprimitivity.hall", dict(w, block=i), status_of(ok),
                                                len(match), len(block), 0,
                                                {"matching": match, "hall_condition": hall}))


def imprimitivity(ctx: Context) -> Iterator[CheckReport]:
    g, group = ctx.g, ctx.inst.group
    for n in ctx.ns():
        for mode in Mode:
            w = ctx.where(n, mode=mode.value)
            reports: list[CheckReport] = []

            def run():
                gi = build_gap_instance(g, group, n, mode, budget=ctx.budget)
                if not isinstance(gi, GapInstance):
                    return CheckReport("imprimitivity.gap", w, Status.NOT_APPLICABLE,
                                       gi.h_n1, 2 * (n + 1) * gi.h_n, None,
                                       {"reason": "no gap", "c_n": gi.h_n, "c_n1": gi.h_n1})
                reports.extend(_gap_reports(ctx, gi, w))
                return CheckReport("imprimitivity.gap", w, Status.PASS, gi.h_n1,
                                   2 * (n + 1) * gi.h_n, gi.h_n1 - 2 * (n + 1) * gi.h_n,
                                   {"c_n": gi.h_n, "c_n1": gi.h_n1})

            yield _guarded(ctx, "imprimitivity.gap", w, run)
            yield from reports
        w = ctx.where(n)
        yield _guarded(ctx, "imprimitivity.weak-bound", w,
                       lambda: _relabel(weak_imprimitivity_bound(g, group, n, ctx.budget), w))

        def key():
            parts = minimize(g, n, "h", ctx.budget).realizer.masks()
            c = max(parts, key=lambda m: (bin(m).count("1"), -parts.index(m)))
            return _relabel(key_lemma_check(group, c), w)

        yield _guarded(ctx, "imprimitivity.key-lemma", w, key)


def _relabel(r: CheckReport, where: dict) -> CheckReport:
    r.instance = dict(where, **{k: v for k, v in r.instance.items() if k not in where})
    return r


# -- edge-transitive ------------------------------------------------------------------

def edge_transitive(ctx: Context) -> Iterator[CheckReport]:
    na = _needs_connected(ctx, "edge-transitive")
    if na:
        yield na
        return
    if len(edge_orbits(ctx.g, ctx.inst.group)) != 1:
        yield CheckReport("edge-transitive", ctx.where(), Status.NOT_APPLICABLE,
                          details={"reason": "group is not edge-transitive"})
        return
    for n in ctx.ns():
        w = ctx.where(n)
        yield _guarded(ctx, "edge-transitive", w,
                       lambda: _relabel(edge_transitive_check(ctx.g, ctx.inst.group, n, ctx.budget), w))


# -- counterexample -----------------------------------------------------------------------

def counterexample(ctx: Context) -> Iterator[CheckReport]:
    fam, params = ctx.inst.family, ctx.inst.params
    if fam == "k2-product":
        N, n, split = params["N"], 2, k2_product_split(params["N"])
    elif fam == "dihedral-product":
        N, n, split = params["N"], params["n"], dihedral_product_split(params["N"], params["n"])
    else:
        yield CheckReport("counterexample", ctx.where(), Status.NOT_APPLICABLE,
                          details={"reason": f"family {fam!r} carries no expectation"})
        return
    w = ctx.where(n)
    yield _guarded(ctx, "counterexample.split", w,
                   lambda: _exact("counterexample.split", w, partition_ratio(ctx.g, split, "h"), 1))
    yield _guarded(ctx, "counterexample.h-low", w,
                   lambda: _exact("counterexample.h-low", w, ctx.value(n, "h"), 1))
    base = minimize(family_complete(N)[0], 2, "h").value
    w1 = ctx.where(n + 1)

    def high():
        hi = ctx.value(n + 1, "h")
        rep = _exact("counterexample.h-high", w1, base, hi)
        lo = ctx.value(n, "h")
        rep.details = {"base_h2": base, "ratio": hi / lo if lo else None}
        return rep

    yield _guarded(ctx, "counterexample.h-high", w1, high)


RUNNERS = {
    "basic": basic,
    "cheeger": cheeger,
    "main": main,
    "imprimitivity": imprimitivity,
    "edge-transitive": edge_transitive,
    "counterexample": counterexample,
}


def run_suites(suites: list[str], instances: list[Instance], n_lo: int = 2, n_hi: int = 10**9,
               budget: int = DEFAULT_BUDGET) -> list[tuple[str, CheckReport]]:
    """Reports in (suite, instance, n) order."""
    names = list(SUITES) if "all" in suites else [s for s in SUITES if s in suites]
    out = []
    ctxs = [Context(inst, n_lo, n_hi, budget) for inst in instances]
    for suite in names:
        for ctx in ctxs:
            for rep in RUNNERS[suite](ctx):
                out.append((suite, rep))
    return out
