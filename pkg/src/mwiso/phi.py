"""The near-permutation homomorphism of realizer parts under a transitive action.

Under a multiplicative gap between consecutive constants, every group element
maps each part of an optimal partition close to some other part. Recording
which part gives a homomorphism from the group into a symmetric group on the
part labels. All comparisons here are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from mwiso.graph import Graph, popcount
from mwiso.isoperimetry import DEFAULT_BUDGET, Quantity, minimize, partition_ratio
from mwiso.partition import Partition
from mwiso.perm import (
    NotTransitive,
    Perm,
    PermGroup,
    acts_by_automorphisms,
    has_subgroup_of_index,
    is_transitive,
)
from mwiso.report import CheckReport, Status, exact_le, repro_bundle, status_of, sub

FULL_TABLE_LIMIT = 1000


class PhiError(RuntimeError):
    pass


class DichotomyViolation(PhiError):
    pass


class UniquenessViolation(PhiError):
    pass


class NotAutomorphisms(ValueError):
    pass


class EmptySet(ValueError):
    pass


class Mode(str, enum.Enum):
    H = "h"
    IOTA = "iota"

    @property
    def quantity(self) -> Quantity:
        return Quantity.H if self is Mode.H else Quantity.IOTA


class Overlap(str, enum.Enum):
    CLOSE = "CLOSE"
    FAR = "FAR"


@dataclass(frozen=True)
class NoGap:
    n: int
    mode: Mode
    h_n: Fraction
    h_n1: Fraction


@dataclass(frozen=True)
class GapInstance:
    graph: Graph
    group: PermGroup
    partition: Partition
    n: int
    mode: Mode
    h_n: Fraction
    h_n1: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.h_n / self.h_n1

    def describe(self) -> dict:
        return {"n": self.n, "mode": self.mode.value, "group_source": self.group.source,
                "h_n": self.h_n, "h_n1": self.h_n1}


def _validate_action(g: Graph, group: PermGroup) -> None:
    if group.domain_size != g.num_vertices:
        raise NotAutomorphisms("group acts on a different number of points")
    if not acts_by_automorphisms(g, group):
        raise NotAutomorphisms("a generator is not a graph automorphism")
    if not is_transitive(group):
        raise NotTransitive("group is not transitive on the vertices")


def build_gap_instance(g: Graph, group: PermGroup, n: int, mode: Mode | str = Mode.H,
                       realizer: Partition | None = None,
                       budget: int = DEFAULT_BUDGET) -> GapInstance | NoGap:
    """Exact constants at ``n`` and ``n + 1``; a GapInstance iff ``c_{n+1} > 2(n+1) c_n``.

    A supplied ``realizer`` must achieve the ``n``-th constant.
    """
    mode = Mode(mode)
    _validate_action(g, group)
    if not 2 <= n <= g.num_vertices - 1:
        raise ValueError(f"n={n} outside [2, {g.num_vertices - 1}]")
    q = mode.quantity
    low = minimize(g, n, q, budget)
    high = minimize(g, n + 1, q, budget)
    if not high.value > 2 * (n + 1) * low.value:
        return NoGap(n, mode, low.value, high.value)
    if realizer is None:
        realizer = low.realizer
    elif partition_ratio(g, realizer, q) != low.value:
        raise ValueError("supplied partition does not achieve the minimum")
    return GapInstance(g, group, realizer, n, mode, low.value, high.value)


def _as_perm(inst: GapInstance, g: Perm | int) -> Perm:
    return inst.group.elements[g] if isinstance(g, int) else g


def _largest(sizes: list[int]) -> int:
    top = max(sizes)
    return sizes.index(top)


def _classify(r: Fraction, a1: int, aj: int, inter: int) -> Overlap:
    slack = r * (a1 + aj)
    close = inter >= aj - slack
    far = inter <= slack
    if close == far:
        raise DichotomyViolation(
            f"overlap {inter} of a part of size {aj} is {'both' if close else 'neither'} close and far")
    return Overlap.CLOSE if close else Overlap.FAR


def classify_overlap(inst: GapInstance, g: Perm | int, j: int, k: int) -> Overlap:
    """CLOSE if ``g(A_j)`` nearly equals ``A_k``, FAR if nearly disjoint from it.

    Labels are those of ``inst.partition``. For the largest part the threshold
    ``r(|A_1| + |A_j|)`` reduces to ``2r|A_1|``.
    """
    masks = inst.partition.masks()
    sizes = [popcount(m) for m in masks]
    inter = popcount(_as_perm(inst, g).apply_mask(masks[j]) & masks[k])
    return _classify(inst.ratio, max(sizes), sizes[j], inter)


@dataclass(frozen=True)
class PhiResult:
    n: int
    l: int
    reindex: tuple[int, ...]
    sigma: tuple[tuple[int, ...], ...]
    closeness: tuple[tuple[int, ...], ...]
    parts: tuple[int, ...]
    closeness_bound: Fraction
    induced_transitive: bool
    certificates: dict = field(default_factory=dict, compare=False)

    @property
    def closeness_max(self) -> int:
        return max((c for row in self.closeness for c in row), default=0)

    def to_json(self) -> dict:
        from mwiso.report import encode

        biggest = max(popcount(m) for m in self.parts)
        return {
            "l": self.l,
            "reindex": list(self.reindex),
            "sigma": [{"element_index": i, "images": list(s)} for i, s in enumerate(self.sigma)],
            # scaled by the largest part, the unit of the closeness bound
            "closeness_max": encode(Fraction(self.closeness_max, biggest)),
        }


def _close_index(r: Fraction, a1: int, masks: list[int], sizes: list[int],
                 image: int, j: int) -> int:
    hits = [k for k, m in enumerate(masks)
            if _classify(r, a1, sizes[j], popcount(image & m)) is Overlap.CLOSE]
    if len(hits) != 1:
        raise UniquenessViolation(f"part {j} has {len(hits)} close images, expected one")
    return hits[0]


def build_phi(inst: GapInstance) -> PhiResult:
    group = inst.group
    r = inst.ratio
    orig = inst.partition.masks()
    sizes0 = [popcount(m) for m in orig]
    first = _largest(sizes0)
    a1 = sizes0[first]
    n = inst.n

    # image of the largest part, in element order
    image_of_first: list[int] = []
    for p in group.elements:
        image_of_first.append(_close_index(r, a1, orig, sizes0, p.apply_mask(orig[first]), first))
    order: list[int] = []
    for k in image_of_first:
        if k not in order:
            order.append(k)
    if order[0] != first:
        raise UniquenessViolation("the identity does not fix the largest part")
    l = len(order)
    reindex = tuple(order + [k for k in range(n) if k not in order])
    masks = [orig[k] for k in reindex]
    sizes = [sizes0[k] for k in reindex]

    diamond = {}
    for j in range(l):
        lo = max((1 - 2 * r) * a1, Fraction(n, n + 1) * a1)
        ok, slack = exact_le(lo, sizes[j])
        diamond[j] = sub(lo, sizes[j], ok, slack)
        if not ok:
            raise PhiError(f"part {j} of size {sizes[j]} is below {lo}")

    bound = 4 * r * a1
    sigma: list[tuple[int, ...]] = []
    closeness: list[tuple[int, ...]] = []
    for p in group.elements:
        row = []
        close_row = []
        for j in range(l):
            image = p.apply_mask(masks[j])
            k = _close_index(r, a1, masks, sizes, image, j)
            if k >= l:
                raise UniquenessViolation(f"part {j} is sent near part {k} outside the first {l}")
            c = popcount(image ^ masks[k])
            if c > bound:
                raise PhiError(f"closeness {c} exceeds {bound}")
            if c > r * (2 * a1 + sizes[j] + sizes[k]):
                raise PhiError(f"closeness {c} exceeds the pairwise bound")
            row.append(k)
            close_row.append(c)
        if sorted(row) != list(range(l)):
            raise PhiError(f"element {p} does not permute the parts")
        sigma.append(tuple(row))
        closeness.append(tuple(close_row))

    e = group.identity_index
    if sigma[e] != tuple(range(l)):
        raise PhiError("identity does not act trivially")
    _check_homomorphism(group, sigma)

    reach = {0}
    frontier = [0]
    while frontier:
        frontier = [s[x] for x in frontier for s in sigma if s[x] not in reach]
        reach.update(frontier)

    return PhiResult(n, l, reindex, tuple(sigma), tuple(closeness), tuple(masks), bound,
                     len(reach) == l, {"diamond": diamond})


def _check_homomorphism(group: PermGroup, sigma: list[tuple[int, ...]]) -> None:
    """sigma(g g') = sigma(g) sigma(g') on all pairs, or on G x generators for large G.

    Checking against generators suffices: every element is a product of them.
    """
    if len(group) <= FULL_TABLE_LIMIT:
        right = range(len(group))
    else:
        right = [group.index(s) for s in group.generators]
    for a, p in enumerate(group.elements):
        sa = sigma[a]
        for b in right:
            ab = group.index(p * group.elements[b])
            sb = sigma[b]
            if sigma[ab] != tuple(sa[sb[x]] for x in range(len(sb))):
                raise PhiError(f"homomorphism law fails at elements {a}, {b}")


def phi_of(phi: PhiResult, group: PermGroup, g: Perm) -> Perm:
    return Perm(phi.sigma[group.index(g)])


def key_lemma_check(group: PermGroup, c: int, eps: Fraction | None = None) -> CheckReport:
    """Almost-invariant sets under a transitive action are almost everything.

    With ``eps*`` the largest ``|C ^ hC| / |C|``, checks ``|W - C| <= (eps*/2)|W|``;
    a supplied ``eps`` is checked as a hypothesis bound as well.
    """
    if not is_transitive(group):
        raise NotTransitive("group is not transitive")
    if hasattr(c, "mask"):
        c = c.mask
    size = popcount(c)
    if size == 0:
        raise EmptySet("C must be non-empty")
    w = group.domain_size
    eps_star = max(Fraction(popcount(c ^ h.apply_mask(c)), size) for h in group.elements)
    lhs = w - size
    rhs = eps_star / 2 * w
    ok, slack = exact_le(lhs, rhs)
    checks = {"conclusion": sub(lhs, rhs, ok, slack)}
    if 2 * size <= w:
        checks["half_implies_eps_ge_1"] = sub(1, eps_star, eps_star >= 1, eps_star - 1)
    if eps is not None:
        eps = Fraction(eps)
        checks["hypothesis"] = sub(eps_star, eps, eps_star <= eps, eps - eps_star)
    status = status_of(all(x["ok"] for x in checks.values()))
    return CheckReport("key-lemma", {"domain": w, "set_size": size}, status, lhs, rhs, slack,
                       {"eps_star": eps_star, "checks": checks})


def assert_l_equals_n(phi: PhiResult, inst: GapInstance) -> CheckReport:
    ok = phi.l == inst.n
    report = CheckReport("l-equals-n", inst.describe(), status_of(ok), phi.l, inst.n,
                         inst.n - phi.l, {"induced_transitive": phi.induced_transitive})
    if not ok:
        report.bundle = repro_bundle(inst.graph, inst.group, n=inst.n, mode=inst.mode.value,
                                     partition=list(inst.partition.part_of))
    return report


def weak_imprimitivity_bound(g: Graph, group: PermGroup, n: int,
                             budget: int = DEFAULT_BUDGET) -> CheckReport:
    """Without a subgroup of index ``n``: ``c_{n+1} <= 2(n+1) c_n`` for h and iota."""
    _validate_action(g, group)
    instance = {"n": n, "group_source": group.source, "group_order": group.order}
    if has_subgroup_of_index(group, n):
        return CheckReport("weak-imprimitivity", instance, Status.NOT_APPLICABLE,
                           details={"reason": f"group has a subgroup of index {n}"})
    checks = {}
    for q in (Quantity.H, Quantity.IOTA):
        low = minimize(g, n, q, budget).value
        high = minimize(g, n + 1, q, budget).value
        rhs = 2 * (n + 1) * low
        ok, slack = exact_le(high, rhs)
        checks[q.value] = sub(high, rhs, ok, slack)
    status = status_of(all(x["ok"] for x in checks.values()))
    h = checks["h"]
    report = CheckReport("weak-imprimitivity", instance, status, h["lhs"], h["rhs"], h["slack"],
                         {"checks": checks})
    if report.failed:
        report.bundle = repro_bundle(g, group, n=n)
    return report
