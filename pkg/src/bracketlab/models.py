"""Preference representations over two-source lotteries.

Every model maps a joint lottery to a real number; compare() turns two such
numbers into a strict preference or a band-width indifference.  The families
differ in how much of the joint distribution they use:

* EU sees the full joint law; EUCN sees only the product of the marginals.
* NB collapses each source to a certainty equivalent before aggregating.
* BIB keeps source 1 explicit and collapses source-2 risk branch by branch
  (conditionally on the source-1 outcome); FIB is its mirror image.
* BIBCN / FIBCN collapse the other source's marginal instead of the
  conditionals, so correlation is ignored.
* GBIBCN / GFIBCN switch between the BIBCN (resp. FIBCN) rule and the NB
  rule depending on whether the collapsed certainty equivalent falls inside
  a designated open region.
* EDU, KM, KMBIB and CRRACESKMBIB are the two-period consumption
  specializations; LambdaMix blends pooled and source-by-source money
  evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    DegenerateParameters,
    DomainViolation,
    NonProductLottery,
)
from .indices import BivariateIndex, UtilityIndex, ce
from .lotteries import (
    JointLottery,
    MarginalLottery,
    conditional,
    is_product,
    marginal,
)

DEFAULT_BAND = 1e-9


# ---------------------------------------------------------------------------
# Open regions on the line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpenSet1D:
    """Finite union of disjoint open intervals, with 0 outside all of them.

    Membership is strict, so interval endpoints are never inside.  The origin
    is excluded because degenerate no-payment lotteries must always be
    evaluated by the narrow rule.
    """

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in ivs:
            if not a < b:
                raise DegenerateParameters(f"empty interval ({a}, {b})")
            if a < 0.0 < b:
                raise DegenerateParameters("open region must not contain 0")
        ordered = tuple(sorted(ivs))
        for (_, b0), (a1, _) in zip(ordered, ordered[1:]):
            if a1 < b0:
                raise DegenerateParameters("intervals must be disjoint")
        object.__setattr__(self, "intervals", ordered)

    def contains(self, t: float) -> bool:
        return any(a < t < b for a, b in self.intervals)

    def boundary(self) -> tuple[float, ...]:
        """Finite endpoints, each a pasting point for the switching rule."""
        pts = []
        for a, b in self.intervals:
            for t in (a, b):
                if math.isfinite(t):
                    pts.append(t)
        return tuple(sorted(set(pts)))

    @property
    def is_empty(self) -> bool:
        return not self.intervals


# ---------------------------------------------------------------------------
# Comparison result
# ---------------------------------------------------------------------------


class Relation(Enum):
    StrictlyPrefers = "strictly_prefers"
    Indifferent = "indifferent"
    StrictlyDispreferred = "strictly_dispreferred"


@dataclass(frozen=True)
class Preference:
    """Outcome of comparing two lotteries under one model.

    The relation reads left to right: StrictlyPrefers means the first
    lottery beats the second.  Values within band * max(1, |V_P|, |V_Q|)
    of each other count as indifferent.
    """

    relation: Relation
    value_p: float
    value_q: float
    band: float

    @property
    def is_strict(self) -> bool:
        return self.relation is not Relation.Indifferent

    @property
    def favors_first(self) -> bool:
        return self.relation is Relation.StrictlyPrefers

    @property
    def favors_second(self) -> bool:
        return self.relation is Relation.StrictlyDispreferred


# ---------------------------------------------------------------------------
# Model families
# ---------------------------------------------------------------------------


class ModelSpec:
    """Base class for preference models; subclasses implement value()."""

    family: str = ""

    def value(self, P: JointLottery) -> float:
        raise NotImplementedError


def _check_unit_interval(name: str, t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise DomainViolation(f"{name} must lie in [0, 1], got {t}")


@dataclass(frozen=True)
class EU(ModelSpec):
    """Expected utility of the joint law: sum of w(x, y) P(x, y)."""

    w: BivariateIndex
    family: str = "eu"

    def value(self, P: JointLottery) -> float:
        return sum(p * self.w(x, y) for x, y, p in P.entries)


@dataclass(frozen=True)
class EUCN(ModelSpec):
    """Expected utility of the product of the marginals.

    Correlation is invisible: only P1 and P2 enter.
    """

    w: BivariateIndex
    family: str = "eu-cn"

    def value(self, P: JointLottery) -> float:
        p1, p2 = marginal(P, 1), marginal(P, 2)
        return sum(
            px * py * self.w(x, y) for x, px in p1.entries for y, py in p2.entries
        )


@dataclass(frozen=True)
class NB(ModelSpec):
    """Narrow bracketing: each source is collapsed to its certainty
    equivalent before the two amounts are aggregated by w."""

    w: BivariateIndex
    v1: UtilityIndex
    v2: UtilityIndex
    family: str = "nb"

    def value(self, P: JointLottery) -> float:
        c1 = ce(self.v1, marginal(P, 1))
        c2 = ce(self.v2, marginal(P, 2))
        return self.w(c1, c2)


@dataclass(frozen=True)
class BIB(ModelSpec):
    """Branch-wise collapse of source-2 risk.

    Within each source-1 branch x, the conditional source-2 lottery is
    replaced by its certainty equivalent; the branch values are then
    averaged under P1.
    """

    w: BivariateIndex
    v2: UtilityIndex
    family: str = "bib"

    def value(self, P: JointLottery) -> float:
        total = 0.0
        for x, px in marginal(P, 1).entries:
            c2 = ce(self.v2, conditional(P, 1, x))
            total += px * self.w(x, c2)
        return total


@dataclass(frozen=True)
class FIB(ModelSpec):
    """Mirror image of BIB: branch on source 2, collapse source-1 risk."""

    w: BivariateIndex
    v1: UtilityIndex
    family: str = "fib"

    def value(self, P: JointLottery) -> float:
        total = 0.0
        for y, py in marginal(P, 2).entries:
            c1 = ce(self.v1, conditional(P, 2, y))
            total += py * self.w(c1, y)
        return total


@dataclass(frozen=True)
class BIBCN(ModelSpec):
    """BIB with correlation neglect: every branch sees the same source-2
    certainty equivalent, taken from the marginal P2."""

    w: BivariateIndex
    v2: UtilityIndex
    family: str = "bib-cn"

    def value(self, P: JointLottery) -> float:
        c2 = ce(self.v2, marginal(P, 2))
        return sum(px * self.w(x, c2) for x, px in marginal(P, 1).entries)


@dataclass(frozen=True)
class FIBCN(ModelSpec):
    """FIB with correlation neglect: branches on source 2, with the
    source-1 marginal collapsed once."""

    w: BivariateIndex
    v1: UtilityIndex
    family: str = "fib-cn"

    def value(self, P: JointLottery) -> float:
        c1 = ce(self.v1, marginal(P, 1))
        return sum(py * self.w(c1, y) for y, py in marginal(P, 2).entries)


@dataclass(frozen=True)
class GBIBCN(ModelSpec):
    """Region-switched bracketing on source 2.

    When the source-2 certainty equivalent falls strictly inside H2 the
    BIBCN rule applies (source 1 stays explicit); otherwise both sources
    collapse and the NB rule applies.  validate_model() checks that w is
    affine in v1 along each finite boundary of H2, which makes the switch
    continuous.
    """

    w: BivariateIndex
    v1: UtilityIndex
    v2: UtilityIndex
    H2: OpenSet1D = OpenSet1D()
    family: str = "gbib-cn"

    def value(self, P: JointLottery) -> float:
        c2 = ce(self.v2, marginal(P, 2))
        if self.H2.contains(c2):
            return sum(px * self.w(x, c2) for x, px in marginal(P, 1).entries)
        return self.w(ce(self.v1, marginal(P, 1)), c2)


@dataclass(frozen=True)
class GFIBCN(ModelSpec):
    """Mirror image of GBIBCN: the switching region H1 lives on source 1."""

    w: BivariateIndex
    v1: UtilityIndex
    v2: UtilityIndex
    H1: OpenSet1D = OpenSet1D()
    family: str = "gfib-cn"

    def value(self, P: JointLottery) -> float:
        c1 = ce(self.v1, marginal(P, 1))
        if self.H1.contains(c1):
            return sum(py * self.w(c1, y) for y, py in marginal(P, 2).entries)
        return self.w(c1, ce(self.v2, marginal(P, 2)))


# ---------------------------------------------------------------------------
# Two-period consumption specializations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EDU(ModelSpec):
    """Expected discounted utility: E u(c1) + beta * E u(c2)."""

    u: UtilityIndex
    beta: float
    family: str = "edu"

    def __post_init__(self) -> None:
        _check_unit_interval("beta", self.beta)

    def value(self, P: JointLottery) -> float:
        p1, p2 = marginal(P, 1), marginal(P, 2)
        return p1.expectation(self.u) + self.beta * p2.expectation(self.u)


@dataclass(frozen=True)
class KM(ModelSpec):
    """Expected transformed discounted utility of consumption paths.

    phi curves the normalized lifetime utility (u(c1) + beta u(c2))/(1 + beta)
    atom by atom, so the full joint law matters.
    """

    u: UtilityIndex
    beta: float
    phi: UtilityIndex
    family: str = "km"

    def __post_init__(self) -> None:
        _check_unit_interval("beta", self.beta)

    def value(self, P: JointLottery) -> float:
        scale = 1.0 + self.beta
        return sum(
            p * self.phi((self.u(x) + self.beta * self.u(y)) / scale)
            for x, y, p in P.entries
        )


@dataclass(frozen=True)
class _ComposedIndex(UtilityIndex):
    """outer(inner(x)); used for certainty equivalents under phi o u."""

    inner: UtilityIndex
    outer: UtilityIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", self.inner.domain)

    def value(self, x: float) -> float:
        return self.outer(self.inner.value(x))

    def inverse(self, v: float) -> float:
        return self.inner.inverse(self.outer.inverse(v))


@dataclass(frozen=True)
class KMBIB(ModelSpec):
    """Branch-wise version of KM.

    Second-period risk is collapsed within each first-period branch to the
    certainty equivalent under phi o u, then lifetime utility is curved by
    phi and averaged over the first period.
    """

    u: UtilityIndex
    beta: float
    phi: UtilityIndex
    family: str = "km-bib"

    def __post_init__(self) -> None:
        _check_unit_interval("beta", self.beta)

    def continuation_ce(self, q: MarginalLottery) -> float:
        return ce(_ComposedIndex(inner=self.u, outer=self.phi), q)

    def value(self, P: JointLottery) -> float:
        total = 0.0
        for x, px in marginal(P, 1).entries:
            c2 = self.continuation_ce(conditional(P, 1, x))
            total += px * self.phi(self.u(x) + self.beta * self.u(c2))
        return total


@dataclass(frozen=True)
class CRRACESKMBIB(ModelSpec):
    """KMBIB specialized to CRRA per-period utility and CES time aggregation.

    Branch value is [(1-beta) c1^rho + beta (E[c2^alpha | c1])^(rho/alpha)]
    raised to alpha/rho, averaged under P1.  rho orders deterministic
    trade-offs over time, alpha orders atemporal risk.  The result is
    multiplied by sign(alpha) so that higher is always better.
    """

    rho: float
    alpha: float
    beta: float
    family: str = "crra-ces-kmbib"

    def __post_init__(self) -> None:
        if self.rho == 0.0 or not self.rho < 1.0:
            raise DomainViolation(f"rho must be nonzero and below 1, got {self.rho}")
        if self.alpha == 0.0 or not self.alpha < 1.0:
            raise DomainViolation(f"alpha must be nonzero and below 1, got {self.alpha}")
        _check_unit_interval("beta", self.beta)

    def value(self, P: JointLottery) -> float:
        for x, y, _ in P.entries:
            if x <= 0.0 or y <= 0.0:
                raise DomainViolation("consumption must be strictly positive")
        total = 0.0
        for c1, p1 in marginal(P, 1).entries:
            q = conditional(P, 1, c1)
            moment = sum(py * y**self.alpha for y, py in q.entries)
            inner = (1.0 - self.beta) * c1**self.rho + self.beta * moment ** (
                self.rho / self.alpha
            )
            total += p1 * inner ** (self.alpha / self.rho)
        return math.copysign(total, self.alpha)


@dataclass(frozen=True)
class LambdaMix(ModelSpec):
    """Convex blend of pooled and source-by-source money evaluation.

    Requires a product lottery.  lam = 1 evaluates the pooled sum x + y,
    lam = 0 adds the two sources' expected utilities separately.
    """

    u: UtilityIndex
    lam: float
    family: str = "lambda-mix"

    def __post_init__(self) -> None:
        _check_unit_interval("lam", self.lam)

    def value(self, P: JointLottery) -> float:
        if not is_product(P):
            raise NonProductLottery("lambda blend is defined for product lotteries only")
        p, q = marginal(P, 1), marginal(P, 2)
        broad = sum(
            px * qy * self.u(x + y) for x, px in p.entries for y, qy in q.entries
        )
        narrow = p.expectation(self.u) + q.expectation(self.u)
        return self.lam * broad + (1.0 - self.lam) * narrow


# ---------------------------------------------------------------------------
# Evaluation and comparison
# ---------------------------------------------------------------------------


def evaluate(model: ModelSpec, P: JointLottery) -> float:
    """Value of a joint lottery under a model; domain violations are hard
    errors, never clamped."""
    return model.value(P)


def compare(
    model: ModelSpec, P: JointLottery, Q: JointLottery, band: float = DEFAULT_BAND
) -> Preference:
    """Rank two lotteries, declaring indifference inside a relative band."""
    vp, vq = evaluate(model, P), evaluate(model, Q)
    scale = max(1.0, abs(vp), abs(vq))
    if abs(vp - vq) <= band * scale:
        relation = Relation.Indifferent
    elif vp > vq:
        relation = Relation.StrictlyPrefers
    else:
        relation = Relation.StrictlyDispreferred
    return Preference(relation=relation, value_p=vp, value_q=vq, band=band)


# ---------------------------------------------------------------------------
# Coherence checks
# ---------------------------------------------------------------------------

_PASTE_TOL = 1e-8


def _index_grid(
    v: UtilityIndex, w_axis: tuple[float, float], n: int = 21
) -> list[float]:
    lo = max(v.domain[0], w_axis[0], -10.0)
    hi = min(v.domain[1], w_axis[1], 10.0)
    if not lo < hi:
        raise DegenerateParameters(f"cannot build a grid on [{lo}, {hi}]")
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _check_affine_slice(wvals: list[float], vvals: list[float], where: str) -> None:
    v0, v1 = vvals[0], vvals[-1]
    if v1 == v0:
        raise DegenerateParameters(f"flat index slice at {where}")
    a = (wvals[-1] - wvals[0]) / (v1 - v0)
    b = wvals[0] - a * v0
    scale = max(1.0, max(abs(t) for t in wvals))
    worst = max(abs(wv - (a * vv + b)) for wv, vv in zip(wvals, vvals))
    if worst > _PASTE_TOL * scale:
        raise DegenerateParameters(
            f"aggregator is not affine in the index at {where} "
            f"(deviation {worst:.3e} over tolerance {_PASTE_TOL:.0e})"
        )


def validate_model(model: ModelSpec, grid: list[float] | None = None) -> None:
    """Check model coherence beyond constructor-level parameter bounds.

    For the region-switched families this verifies the pasting condition:
    at every finite boundary point of the switching region, the aggregator
    restricted to that slice must be affine in the collapsed source's index,
    so the two evaluation rules agree there.  Deviations are measured on a
    grid and must stay within 1e-8 relative.

    Raises:
        DegenerateParameters: the pasting condition fails, or a grid cannot
            be formed.
    """
    if isinstance(model, GBIBCN):
        xs = grid if grid is not None else _index_grid(model.v1, model.w.box()[0])
        for y in model.H2.boundary():
            wvals = [model.w(x, y) for x in xs]
            vvals = [model.v1(x) for x in xs]
            _check_affine_slice(wvals, vvals, where=f"y = {y}")
    elif isinstance(model, GFIBCN):
        ys = grid if grid is not None else _index_grid(model.v2, model.w.box()[1])
        for x in model.H1.boundary():
            wvals = [model.w(x, y) for y in ys]
            vvals = [model.v2(y) for y in ys]
            _check_affine_slice(wvals, vvals, where=f"x = {x}")
    # other families: constructor checks are already sufficient
