"""Block systems from averaged part indicators, Hall matchings, and the headline bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from mwiso.graph import Graph, is_connected, popcount
from mwiso.isoperimetry import DEFAULT_BUDGET, Quantity, minimize, partition_ratio
from mwiso.partition import Partition
from mwiso.perm import BlockSystem, NotTransitive, PermGroup, edge_orbits, is_block_system
from mwiso.phi import (
    GapInstance,
    Mode,
    PhiError,
    PhiResult,
    _validate_action,
    build_phi,
)
from mwiso.report import CheckReport, exact_le, repro_bundle, status_of, sub

HALL_EXHAUSTIVE_LIMIT = 12


class ImprimitivityError(RuntimeError):
    pass


class NotFullDegree(ImprimitivityError):
    pass


class DegenerateLevelSet(ImprimitivityError):
    pass


class MatchingIncomplete(ImprimitivityError):
    pass


class NotConnected(ValueError):
    pass


class NotEdgeTransitive(ValueError):
    pass


def _require_full(phi: PhiResult) -> None:
    if phi.l != phi.n:
        raise NotFullDegree(f"l={phi.l} is below n={phi.n}")


def coset_classes(phi: PhiResult, group: PermGroup) -> dict[tuple[int, int], list[int]]:
    """``(i, j)`` -> indices of elements sending part ``j`` to part ``i``."""
    _require_full(phi)
    n = phi.n
    classes: dict[tuple[int, int], list[int]] = {(i, j): [] for i in range(n) for j in range(n)}
    for a, s in enumerate(phi.sigma):
        for j in range(n):
            classes[(s[j], j)].append(a)
    expected = len(group) // n
    for key, members in classes.items():
        if len(members) != expected:
            raise ImprimitivityError(f"class {key} has {len(members)} elements, expected {expected}")
    # spot check G_ij G_jk inside G_ik on the first member of each class
    for i in range(n):
        for j in range(n):
            x = group.elements[classes[(i, j)][0]]
            for k in range(n):
                y = group.elements[classes[(j, k)][0]]
                if phi.sigma[group.index(x * y)][k] != i:
                    raise ImprimitivityError(f"G_{i}{j} G_{j}{k} leaves G_{i}{k}")
    return classes


@dataclass(frozen=True)
class AveragedFunction:
    values: tuple[Fraction, ...]
    part_index: int

    def __call__(self, v: int) -> Fraction:
        return self.values[v]


def averaged_functions(inst: GapInstance, phi: PhiResult,
                       details: dict | None = None) -> list[AveragedFunction]:
    """Average the translates of each part indicator over the group.

    The value at ``v`` for part ``i`` is the fraction of pairs ``(g, j)`` with
    ``sigma_g(j) = i`` and ``v`` in ``g(A_j)``, taken over ``|G|`` elements.
    """
    _require_full(phi)
    group = inst.group
    n, N = phi.n, inst.graph.num_vertices
    cnt = [[0] * N for _ in range(n)]
    for a, p in enumerate(group.elements):
        s = phi.sigma[a]
        for j in range(n):
            row = cnt[s[j]]
            m = p.apply_mask(phi.parts[j])
            while m:
                low = m & -m
                row[low.bit_length() - 1] += 1
                m ^= low
    order = len(group)
    zetas = [AveragedFunction(tuple(Fraction(c, order) for c in cnt[i]), i) for i in range(n)]

    for v in range(N):
        if sum(z.values[v] for z in zetas) != 1:
            raise ImprimitivityError(f"averages do not sum to one at {v}")
    for a, p in enumerate(group.elements):
        s = phi.sigma[a]
        for j in range(n):
            zi, zj = zetas[s[j]].values, zetas[j].values
            if any(zi[p(u)] != zj[u] for u in range(N)):
                raise ImprimitivityError(f"averages are not equivariant under element {a}")

    r = inst.ratio
    a1 = max(popcount(m) for m in phi.parts)
    proven = 4 * r * a1
    stated = Fraction(n - 1, n) * proven
    dist = []
    for i, z in enumerate(zetas):
        xi = phi.parts[i]
        d = sum((1 - x) if (xi >> v) & 1 else x for v, x in enumerate(z.values))
        if d > proven:
            raise ImprimitivityError(f"l1 distance {d} of average {i} exceeds {proven}")
        dist.append(d)
    if details is not None:
        c = Fraction(n * n - 1, n * n + 1)
        gap = c * 4 * r
        details["l1"] = {"distances": dist, "bound": proven, "bound_scaled": stated,
                         "scaled_ok": all(d <= stated for d in dist)}
        values = [x for z in zetas for x in z.values]
        details["two_sided_gap"] = {"width": gap,
                                    "ok": all(x <= gap or x >= 1 - gap for x in values)}
    return zetas


def level_set_blocks(zetas: list[AveragedFunction]) -> BlockSystem:
    """Blocks ``{v : zeta_i(v) > 1/2}`` in part order."""
    if not zetas:
        raise DegenerateLevelSet("no functions")
    N = len(zetas[0].values)
    half = Fraction(1, 2)
    blocks = [tuple(v for v in range(N) if z.values[v] > half) for z in zetas]
    covered = sorted(v for b in blocks for v in b)
    if covered != list(range(N)):
        missing = sorted(set(range(N)) - set(covered))
        raise DegenerateLevelSet(f"vertices {missing} lie in no level set")
    if any(not b for b in blocks):
        raise DegenerateLevelSet("an empty level set")
    return BlockSystem(tuple(blocks))


@dataclass(frozen=True)
class ImprimitivityCertificate:
    blocks: BlockSystem
    realizer: Partition
    sym_diffs: tuple[int, ...]
    bound: Fraction
    checks: dict
    details: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks.blocks],
            "realizer": list(self.realizer.part_of),
            "sym_diffs": list(self.sym_diffs),
            "bound": {"num": self.bound.numerator, "den": self.bound.denominator},
            "checks": dict(self.checks),
        }


def build_certificate(inst: GapInstance, phi: PhiResult | None = None) -> ImprimitivityCertificate:
    """Blocks from the averaged indicators, with the three certificate items verified.

    ``a``: the blocks form a block system; ``b``: the realizer achieves the
    constant; ``c``: each block differs from its part in at most ``4r|V|`` vertices.
    """
    fresh = build_phi(inst)
    if phi is not None and phi != fresh:
        raise PhiError("supplied homomorphism does not match the construction")
    phi = fresh
    coset_classes(phi, inst.group)
    details: dict = {}
    zetas = averaged_functions(inst, phi, details)
    blocks = level_set_blocks(zetas)
    N = inst.graph.num_vertices
    realizer = Partition.from_blocks(N, [[v for v in range(N) if (m >> v) & 1] for m in phi.parts])
    sym = tuple(popcount(m ^ b) for m, b in zip(phi.parts, blocks.masks()))
    bound = 4 * inst.ratio * N
    checks = {
        "a": is_block_system(inst.group, blocks, all_elements=True),
        "b": partition_ratio(inst.graph, realizer, inst.mode.quantity) == inst.h_n,
        "c": all(s <= bound for s in sym),
    }
    details["blocks_equal_parts"] = all(s == 0 for s in sym)
    return ImprimitivityCertificate(blocks, realizer, sym, bound, checks, details)


def hall_matching(g: Graph, blocks: BlockSystem, i: int) -> dict[int, int]:
    """Injective ``v -> w`` from block ``i`` to its complement along edges (augmenting paths)."""
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    block = blocks.blocks[i]
    inside = set(block)
    match_of: dict[int, int] = {}

    def augment(v: int, seen: set[int]) -> bool:
        for w in g.neighbors(v):
            if w in inside or w in seen:
                continue
            seen.add(w)
            if w not in match_of or augment(match_of[w], seen):
                match_of[w] = v
                return True
        return False

    for v in block:
        if not augment(v, set()):
            raise MatchingIncomplete(f"vertex {v} of block {i} cannot be matched")
    return {v: w for w, v in sorted(match_of.items())}


def hall_condition_exhaustive(g: Graph, blocks: BlockSystem, i: int) -> bool:
    """``|N(K) - V_i| >= |K|`` for every non-empty ``K`` inside block ``i``."""
    block = blocks.blocks[i]
    if len(block) > HALL_EXHAUSTIVE_LIMIT:
        raise ValueError(f"block of size {len(block)} is above the exhaustive limit")
    inside = sum(1 << v for v in block)
    for k in range(1, len(block) + 1):
        for sub_ in combinations(block, k):
            nb = 0
            for v in sub_:
                nb |= g.adj_masks[v]
            if popcount(nb & ~inside) < k:
                return False
    return True


def _instance(n: int, group: PermGroup, **extra) -> dict:
    return {"n": n, "group_source": group.source, **extra}


def main_theorem_check(g: Graph, group: PermGroup, n: int, mode: Mode | str = Mode.H,
                       budget: int = DEFAULT_BUDGET) -> CheckReport:
    """``h_n >= h_{n+1}/(10n + h_{n+1})``, or for iota ``iota_n >= 2 iota_{n+1}/(20n + iota_{n+1})``
    together with ``iota_{n+1} <= (11n + 1) iota_n``."""
    mode = Mode(mode)
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    _validate_action(g, group)
    if not 2 <= n <= g.num_vertices - 1:
        raise ValueError(f"n={n} outside [2, {g.num_vertices - 1}]")
    low = minimize(g, n, mode.quantity, budget).value
    high = minimize(g, n + 1, mode.quantity, budget).value
    checks = {}
    if mode is Mode.H:
        rhs = high / (10 * n + high)
    else:
        rhs = 2 * high / (20 * n + high)
    ok, slack = exact_le(rhs, low)
    checks["lower"] = sub(low, rhs, ok, slack)
    if mode is Mode.IOTA:
        cap = (11 * n + 1) * low
        ok2, slack2 = exact_le(high, cap)
        checks["linear"] = sub(high, cap, ok2, slack2)
    tight = rhs / low if low else None
    report = CheckReport(f"main-{mode.value}", _instance(n, group, mode=mode.value),
                         status_of(all(c["ok"] for c in checks.values())), low, rhs, slack,
                         {"checks": checks, "tightness": tight, "c_n1": high})
    if report.failed:
        report.bundle = repro_bundle(g, group, n=n, mode=mode.value)
    return report


def edge_transitive_check(g: Graph, group: PermGroup, n: int,
                          budget: int = DEFAULT_BUDGET) -> CheckReport:
    """``h_{n+1} <= (10n + 1) h_n`` for vertex- and edge-transitive actions."""
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    _validate_action(g, group)
    if len(edge_orbits(g, group)) != 1:
        raise NotEdgeTransitive("group has more than one edge orbit")
    low = minimize(g, n, Quantity.H, budget).value
    high = minimize(g, n + 1, Quantity.H, budget).value
    rhs = (10 * n + 1) * low
    ok, slack = exact_le(high, rhs)
    report = CheckReport("edge-transitive", _instance(n, group), status_of(ok), high, rhs, slack)
    if report.failed:
        report.bundle = repro_bundle(g, group, n=n)
    return report


__all__ = [
    "AveragedFunction", "DegenerateLevelSet", "ImprimitivityCertificate", "MatchingIncomplete",
    "NotConnected", "NotEdgeTransitive", "NotFullDegree", "NotTransitive", "averaged_functions",
    "build_certificate", "coset_classes", "edge_transitive_check", "hall_condition_exhaustive",
    "hall_matching", "level_set_blocks", "main_theorem_check",
]
