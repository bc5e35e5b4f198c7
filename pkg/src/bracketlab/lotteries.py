"""Finite-support lottery algebra for two-source risk.

Outcomes are pairs (x, y) with x from source 1 and y from source 2.  A joint
lottery is a finite list of atoms with positive probability mass; marginal
lotteries live on a single source.  All values are immutable after
construction, so they can be shared freely.

Outcome coordinates are canonicalized by rounding to 12 significant decimals
before atoms are merged.  This makes support sets, conditionals and equality
deterministic in the presence of float noise from mixtures.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    EmptySupport,
    DomainViolation,
    OutcomeNotInSupport,
    OutcomeOutOfBounds,
    ProbabilitySumOutOfTolerance,
    SourceMismatch,
    SpaceMismatch,
)

PROB_TOL = 1e-9
_SIG_DECIMALS = 12

INF = float("inf")


def canonical(value: float) -> float:
    """Round to 12 significant decimals; the atom-merge equality key."""
    v = float(value)
    if v == 0.0:
        return 0.0
    if not math.isfinite(v):
        return v
    return round(v, _SIG_DECIMALS - 1 - math.floor(math.log10(abs(v))))


# ---------------------------------------------------------------------------
# Outcome space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeSpace:
    """A product of two closed intervals, each containing 0.

    Defaults to the whole plane; bounded boxes are opt-in.  Infinite bounds
    are ordinary float infinities.
    """

    lo1: float = -INF
    hi1: float = INF
    lo2: float = -INF
    hi2: float = INF

    def __post_init__(self) -> None:
        for lo, hi in ((self.lo1, self.hi1), (self.lo2, self.hi2)):
            if not lo < hi:
                raise DomainViolation(f"degenerate outcome interval [{lo}, {hi}]")
            if not (lo <= 0.0 <= hi):
                raise DomainViolation(f"outcome interval [{lo}, {hi}] must contain 0")

    def bounds(self, source: int) -> tuple[float, float]:
        if source == 1:
            return (self.lo1, self.hi1)
        if source == 2:
            return (self.lo2, self.hi2)
        raise SourceMismatch(f"source must be 1 or 2, got {source}")

    def contains(self, x: float, y: float) -> bool:
        return self.lo1 <= x <= self.hi1 and self.lo2 <= y <= self.hi2


REAL_PLANE = OutcomeSpace()


# ---------------------------------------------------------------------------
# Lottery types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointLottery:
    """Finite-support probability measure on the outcome space.

    ``entries`` is a tuple of (x, y, p) atoms, lexicographically sorted with
    canonical coordinates; all p > 0 and sum to 1.  Use :func:`make_joint`
    instead of the raw constructor.
    """

    entries: tuple[tuple[float, float, float], ...]
    space: OutcomeSpace = REAL_PLANE

    def pmf(self, x: float, y: float) -> float:
        cx, cy = canonical(x), canonical(y)
        for ex, ey, p in self.entries:
            if ex == cx and ey == cy:
                return p
        return 0.0

    @property
    def support(self) -> tuple[tuple[float, float], ...]:
        return tuple((x, y) for x, y, _ in self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class MarginalLottery:
    """Finite-support measure on one source, bounds inherited from the space."""

    entries: tuple[tuple[float, float], ...]
    source: int = 1
    lo: float = -INF
    hi: float = INF

    def pmf(self, x: float) -> float:
        cx = canonical(x)
        for ex, p in self.entries:
            if ex == cx:
                return p
        return 0.0

    def cdf(self, t: float) -> float:
        return sum(p for x, p in self.entries if x <= t)

    @property
    def support(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.entries)

    @property
    def is_degenerate(self) -> bool:
        return len(self.entries) == 1

    def expectation(self, f=None) -> float:
        if f is None:
            return sum(x * p for x, p in self.entries)
        return sum(f(x) * p for x, p in self.entries)

    def __iter__(self):
        return iter(self.entries)


class Dominance(enum.Enum):
    DominatesPoint = "DominatesPoint"
    DominatedByPoint = "DominatedByPoint"
    Neither = "Neither"


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _merge_1d(pairs) -> list[tuple[float, float]]:
    acc: dict[float, float] = {}
    for x, p in pairs:
        if p < 0.0:
            raise ProbabilitySumOutOfTolerance(f"negative probability {p}")
        cx = canonical(x)
        acc[cx] = acc.get(cx, 0.0) + float(p)
    return sorted((x, p) for x, p in acc.items() if p > 0.0)


def _unit_masses(ps: list[float]) -> list[float]:
    """Rescale masses to unit total, as a fixed point.

    A list this function has already produced passes through unchanged,
    which keeps constructor round trips byte-stable.  After rescaling, the
    float residual is absorbed into the largest atom, so the test for "is
    already normalized" is complement consistency at some index rather
    than an exact float sum of 1 (which rescaling cannot always achieve).
    """
    total = math.fsum(ps)
    if abs(total - 1.0) > PROB_TOL:
        raise ProbabilitySumOutOfTolerance(
            f"probabilities sum to {total!r}, off by more than {PROB_TOL}"
        )
    n = len(ps)
    if total == 1.0:
        return ps
    for k in range(n):
        if 1.0 - math.fsum(ps[i] for i in range(n) if i != k) == ps[k]:
            return ps
    scaled = [m / total for m in ps]
    k = max(range(n), key=scaled.__getitem__)
    scaled[k] = 1.0 - math.fsum(m for i, m in enumerate(scaled) if i != k)
    return scaled


def make_joint(entries, space: OutcomeSpace = REAL_PLANE) -> JointLottery:
    """Build a canonical joint lottery from (x, y, p) triples.

    Duplicate outcome pairs (after 12-significant-decimal rounding) are
    merged, zero-mass atoms dropped, and the masses renormalized provided
    the total is within 1e-9 of 1.

    Args:
        entries: iterable of (x, y, p) with p >= 0.
        space: outcome space the support must respect.

    Raises:
        EmptySupport: no atom carries positive mass.
        ProbabilitySumOutOfTolerance: masses do not sum to 1 within 1e-9.
        OutcomeOutOfBounds: an atom lies outside ``space``.
    """
    acc: dict[tuple[float, float], float] = {}
    for x, y, p in entries:
        if p < 0.0:
            raise ProbabilitySumOutOfTolerance(f"negative probability {p}")
        key = (canonical(x), canonical(y))
        acc[key] = acc.get(key, 0.0) + float(p)
    atoms = sorted((xy, p) for xy, p in acc.items() if p > 0.0)
    if not atoms:
        raise EmptySupport("joint lottery needs at least one positive-mass atom")
    for (x, y), _ in atoms:
        if not space.contains(x, y):
            raise OutcomeOutOfBounds(f"atom ({x}, {y}) outside the outcome space")
    masses = _unit_masses([p for _, p in atoms])
    return JointLottery(
        entries=tuple((x, y, p) for ((x, y), _), p in zip(atoms, masses)),
        space=space,
    )


def make_marginal(entries, source: int = 1, lo: float = -INF, hi: float = INF) -> MarginalLottery:
    """One-dimensional analogue of :func:`make_joint`."""
    if source not in (1, 2):
        raise SourceMismatch(f"source must be 1 or 2, got {source}")
    atoms = _merge_1d(entries)
    if not atoms:
        raise EmptySupport("marginal lottery needs at least one positive-mass atom")
    for x, _ in atoms:
        if not lo <= x <= hi:
            raise OutcomeOutOfBounds(f"outcome {x} outside [{lo}, {hi}]")
    masses = _unit_masses([p for _, p in atoms])
    return MarginalLottery(
        entries=tuple((x, p) for (x, _), p in zip(atoms, masses)),
        source=source,
        lo=lo,
        hi=hi,
    )


def delta(x: float, source: int = 1, lo: float = -INF, hi: float = INF) -> MarginalLottery:
    """Degenerate one-source lottery at ``x``."""
    return make_marginal([(x, 1.0)], source=source, lo=lo, hi=hi)


def degenerate_joint(x: float, y: float, space: OutcomeSpace = REAL_PLANE) -> JointLottery:
    """Degenerate joint lottery at the outcome pair (x, y)."""
    return make_joint([(x, y, 1.0)], space=space)


# ---------------------------------------------------------------------------
# Marginals, conditionals, mixtures, products
# ---------------------------------------------------------------------------


def _merge_canonical(pairs) -> list[tuple[float, float]]:
    """Merge pairs whose keys are already canonical (atoms of built lotteries)."""
    acc: dict[float, float] = {}
    for x, p in pairs:
        acc[x] = acc.get(x, 0.0) + p
    return sorted(acc.items())


def marginal(P: JointLottery, i: int) -> MarginalLottery:
    """Marginal lottery of P in source ``i``."""
    lo, hi = P.space.bounds(i)
    if i == 1:
        pairs = [(x, p) for x, _, p in P.entries]
    else:
        pairs = [(y, p) for _, y, p in P.entries]
    return MarginalLottery(entries=tuple(_merge_canonical(pairs)), source=i, lo=lo, hi=hi)


def conditional(P: JointLottery, i: int, x: float) -> MarginalLottery:
    """Conditional distribution of the other source given outcome ``x`` in source ``i``.

    Raises:
        OutcomeNotInSupport: ``x`` is not in the support of the i-th marginal.
    """
    cx = canonical(x)
    lo, hi = P.space.bounds(3 - i)
    if i == 1:
        pairs = [(y, p) for ex, y, p in P.entries if ex == cx]
    else:
        pairs = [(ex, p) for ex, y, p in P.entries if y == cx]
    mass = sum(p for _, p in pairs)
    if mass <= 0.0:
        raise OutcomeNotInSupport(f"outcome {x} not in the source-{i} support")
    atoms = _merge_canonical((v, p / mass) for v, p in pairs)
    return MarginalLottery(entries=tuple(atoms), source=3 - i, lo=lo, hi=hi)


def mix(alpha: float, P: JointLottery, Q: JointLottery) -> JointLottery:
    """Pointwise mixture alpha*P + (1-alpha)*Q."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainViolation(f"mixture weight {alpha} outside [0, 1]")
    if P.space != Q.space:
        raise SpaceMismatch("cannot mix lotteries on different outcome spaces")
    acc: dict[tuple[float, float], float] = {}
    for x, y, p in P.entries:
        acc[(x, y)] = alpha * p
    for x, y, p in Q.entries:
        key = (x, y)
        acc[key] = acc.get(key, 0.0) + (1.0 - alpha) * p
    atoms = sorted((k, p) for k, p in acc.items() if p > 0.0)
    masses = _unit_masses([p for _, p in atoms])
    return JointLottery(
        entries=tuple((x, y, p) for ((x, y), _), p in zip(atoms, masses)),
        space=P.space,
    )


def mix_marginal(alpha: float, p: MarginalLottery, q: MarginalLottery) -> MarginalLottery:
    """Pointwise mixture of two same-source marginal lotteries."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainViolation(f"mixture weight {alpha} outside [0, 1]")
    if p.source != q.source:
        raise SourceMismatch("cannot mix marginals from different sources")
    pairs = [(x, alpha * w) for x, w in p.entries]
    pairs += [(x, (1.0 - alpha) * w) for x, w in q.entries]
    return make_marginal(
        pairs, source=p.source, lo=min(p.lo, q.lo), hi=max(p.hi, q.hi)
    )


def product(p: MarginalLottery, q: MarginalLottery) -> JointLottery:
    """Product lottery (p, q) with independent sources.

    Args:
        p: source-1 marginal.
        q: source-2 marginal.
    """
    if p.source != 1 or q.source != 2:
        raise SourceMismatch("product expects a source-1 and a source-2 marginal")
    space = OutcomeSpace(lo1=p.lo, hi1=p.hi, lo2=q.lo, hi2=q.hi)
    # Atoms of built marginals are canonical and sorted, so the cross product
    # is already a valid entry tuple; skip the general merge.
    entries = [(x, y, px * qy) for x, px in p.entries for y, qy in q.entries]
    masses = _unit_masses([pr for _, _, pr in entries])
    return JointLottery(
        entries=tuple((x, y, pr) for (x, y, _), pr in zip(entries, masses)),
        space=space,
    )


def is_product(P: JointLottery, rel_tol: float = 1e-12) -> bool:
    """True iff P(x, y) = P1(x) * P2(y) for every pair of support points."""
    p1, p2 = marginal(P, 1), marginal(P, 2)
    for x, px in p1.entries:
        for y, qy in p2.entries:
            expected = px * qy
            if abs(P.pmf(x, y) - expected) > rel_tol * max(1.0, expected):
                return False
    return True


# ---------------------------------------------------------------------------
# Shifts, dominance, FOSD, money aggregate
# ---------------------------------------------------------------------------


def shift_clamped(P: JointLottery, a1: float, a2: float) -> JointLottery:
    """Sure gain of a_i in source i, clamped at the space's upper bounds.

    Each atom moves to (min(x + a1, hi1), min(y + a2, hi2)); mass is
    preserved and coinciding targets merge.  With infinite upper bounds the
    operation is an exact translation.
    """
    if a1 < 0.0 or a2 < 0.0:
        raise DomainViolation("sure gains must be nonnegative")
    entries = [
        (min(x + a1, P.space.hi1), min(y + a2, P.space.hi2), p)
        for x, y, p in P.entries
    ]
    return make_joint(entries, space=P.space)


def dominance(P: JointLottery, x1: float, x2: float) -> Dominance:
    """Dominance of P against the degenerate outcome pair (x1, x2).

    P dominates the point when P != (x1, x2) and every support coordinate is
    at least the point coordinate in both sources; the point dominates P in
    the mirrored case.
    """
    point = (canonical(x1), canonical(x2))
    if len(P.entries) == 1 and (P.entries[0][0], P.entries[0][1]) == point:
        return Dominance.Neither
    s1 = marginal(P, 1).support
    s2 = marginal(P, 2).support
    if all(v >= point[0] for v in s1) and all(v >= point[1] for v in s2):
        return Dominance.DominatesPoint
    if all(v <= point[0] for v in s1) and all(v <= point[1] for v in s2):
        return Dominance.DominatedByPoint
    return Dominance.Neither


def fosd_weak(p: MarginalLottery, q: MarginalLottery) -> bool:
    """Weak first-order stochastic dominance of p over q (CDF of p below q)."""
    if p.source != q.source:
        raise SourceMismatch("FOSD compares marginals from the same source")
    grid = sorted(set(p.support) | set(q.support))
    return all(p.cdf(t) <= q.cdf(t) + 1e-15 for t in grid)


def fosd_strict(p: MarginalLottery, q: MarginalLottery) -> bool:
    """Strict FOSD: weak dominance and p != q."""
    return fosd_weak(p, q) and p.entries != q.entries


def money_aggregate(P: JointLottery) -> MarginalLottery:
    """Distribution of the coordinate sum x + y.

    Used for broad-bracketing money analysis, where the two sources pay out
    simultaneously.  Returned as a source-1 lottery with summed bounds.
    """
    pairs = [(x + y, p) for x, y, p in P.entries]
    atoms = _merge_1d(pairs)
    return MarginalLottery(
        entries=tuple(atoms),
        source=1,
        lo=P.space.lo1 + P.space.lo2,
        hi=P.space.hi1 + P.space.hi2,
    )
