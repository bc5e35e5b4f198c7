"""Randomized consistency lab for preference axioms.

Each checker hunts for counterexamples to one axiom by sampling premise
tuples from a bounded outcome grid, calibrating any exact-indifference
premise against the oracle itself (bisection on a degenerate outcome), and
then testing the axiom's conclusion.  A checker can return ``Violated``
with replayable counterexamples or ``NoViolationFound``; it never claims
an axiom is satisfied, because a finite search cannot.

Design rules shared by all checkers:

* Trials are independent: trial ``t`` draws from an RNG substream derived
  from ``(seed, t)``, so reports are reproducible and trivially
  partitionable.
* Strict premises must hold by a wide margin (``margin_factor`` times the
  oracle's indifference band) before a trial counts.  This keeps premise
  noise from leaking into the conclusion: a mixture conclusion inherits at
  least ``alpha * margin`` of slack, which is far above the band for every
  model whose values stay within the margin factor.
* Exactly-indifferent premises are built by root-finding a degenerate
  outcome against the oracle, never by peeking at model internals.
* Deterministic axioms over sure outcomes (correlation aversion,
  broad-bracketing-without-risk, long-run risk aversion) enumerate the
  grid instead of sampling; the trial count reported is the enumeration
  size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import PreconditionSamplerExhausted
from .indices import UtilityIndex
from .lotteries import (
    Dominance,
    JointLottery,
    MarginalLottery,
    degenerate_joint,
    delta,
    dominance,
    is_product,
    make_joint,
    make_marginal,
    marginal,
    mix,
    mix_marginal,
    product,
)
from .models import DEFAULT_BAND, ModelSpec, Preference, Relation, compare

__all__ = [
    "AxiomId",
    "Verdict",
    "PreferenceOracle",
    "SamplerConfig",
    "ComparisonRecord",
    "Violation",
    "AxiomReport",
    "BracketingReport",
    "check_axiom",
    "classify_bracketing",
    "verify_violation",
    "format_axiom_report",
    "format_bracketing_report",
]


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------


class AxiomId(Enum):
    """Checkable axioms.  Values double as CLI identifiers."""

    Monotonicity = "monotonicity"
    Independence = "independence"
    BiIndependence = "bi-independence"
    CorrelationNeglect = "correlation-neglect"
    MultilinearIndependence = "multilinear-independence"
    ConditionalIndependence = "conditional-independence"
    WeakMultilinearIndependence = "weak-multilinear-independence"
    CorrelationConsistency = "correlation-consistency"
    ForwardCorrelationConsistency = "forward-correlation-consistency"
    BroadBracketingNoRisk = "broad-bracketing-no-risk"
    Symmetry = "symmetry"
    HistoryIndependence = "history-independence"
    Stationarity = "stationarity"
    Recursivity = "recursivity"
    CorrelationAversion = "correlation-aversion"
    LongRunRiskAversion = "long-run-risk-aversion"
    OrdinalDominance = "ordinal-dominance"
    DiscountedUtilityNoRisk = "discounted-utility-no-risk"


class Verdict(Enum):
    NoViolationFound = "NoViolationFound"
    Violated = "Violated"


@dataclass(frozen=True)
class PreferenceOracle:
    """A total comparator over joint lotteries.

    The lab only ever talks to this interface, so anything that can rank
    two lotteries (a model, a lookup table, a human-subject playback) can
    be audited.  ``band`` is the indifference band the comparator applies;
    the lab uses it to size premise margins.
    """

    comparator: Callable[[JointLottery, JointLottery], Preference]
    band: float = DEFAULT_BAND
    label: str = "oracle"

    def __call__(self, P: JointLottery, Q: JointLottery) -> Preference:
        return self.comparator(P, Q)

    @classmethod
    def from_model(cls, model: ModelSpec, band: float = DEFAULT_BAND) -> "PreferenceOracle":
        def comparator(P: JointLottery, Q: JointLottery) -> Preference:
            return compare(model, P, Q, band=band)

        return cls(comparator=comparator, band=band, label=model.family)


@dataclass(frozen=True)
class SamplerConfig:
    """Deterministic sampling plan for the axiom checkers.

    Attributes:
        seed: master seed; trial t uses the substream spawned at (seed, t).
        lo, hi, step: the outcome grid, identical in both sources.
        max_support: largest marginal support drawn by the samplers.
        trials: sampling budget per axiom.
        weights: mixture weights alpha tested in each trial.
        margin_factor: strict premises must exceed margin_factor * band
            (scaled) before a trial counts as precondition-satisfying.
        max_recorded: counterexamples stored verbatim in the report; the
            total count is always exact.
    """

    seed: int = 0
    lo: float = -10.0
    hi: float = 10.0
    step: float = 0.5
    max_support: int = 3
    trials: int = 10_000
    weights: tuple[float, ...] = (0.25, 0.5, 0.75)
    margin_factor: float = 1e3
    max_recorded: int = 10

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.step <= 0.0:
            raise ValueError("step must be positive")
        if not 1 <= self.max_support <= 4:
            raise ValueError("max_support must be between 1 and 4")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not self.weights or any(not 0.0 < a < 1.0 for a in self.weights):
            raise ValueError("mixture weights must lie strictly inside (0, 1)")
        if self.margin_factor < 1.0:
            raise ValueError("margin_factor must be at least 1")

    @classmethod
    def consumption(cls, **overrides) -> "SamplerConfig":
        """Positive-outcome variant used by the time-preference models."""
        overrides.setdefault("lo", 0.1)
        overrides.setdefault("hi", 10.0)
        return cls(**overrides)

    def grid(self) -> tuple[float, ...]:
        pts = []
        k = 0
        while True:
            t = round(self.lo + k * self.step, 10)
            if t > self.hi + 1e-9:
                break
            pts.append(t)
            k += 1
        return tuple(pts)


@dataclass(frozen=True)
class ComparisonRecord:
    """One oracle verdict inside a counterexample, by lottery label."""

    left: str
    right: str
    relation: Relation


@dataclass(frozen=True)
class Violation:
    """A replayable counterexample: the lotteries plus every verdict used."""

    trial: int
    alpha: Optional[float]
    lotteries: tuple[tuple[str, JointLottery], ...]
    observed: tuple[ComparisonRecord, ...]
    note: str = ""

    def lottery(self, label: str) -> JointLottery:
        for name, P in self.lotteries:
            if name == label:
                return P
        raise KeyError(label)


def verify_violation(oracle: PreferenceOracle, violation: Violation) -> bool:
    """Re-run every recorded comparison; True iff all verdicts reproduce."""
    for rec in violation.observed:
        pref = oracle(violation.lottery(rec.left), violation.lottery(rec.right))
        if pref.relation is not rec.relation:
            return False
    return True


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one checker run.

    ``constructions`` counts trials where the structural premise objects
    (calibrated lotteries, admissible grids) could be built at all;
    ``preconditions_found`` counts the subset whose preference premises
    also held.  A report with zero preconditions is still a valid
    NoViolationFound: the axiom was never exercised, hence never refuted.
    """

    axiom: AxiomId
    seed: int
    trials: int
    constructions: int
    preconditions_found: int
    violation_count: int
    violations: tuple[Violation, ...] = ()

    @property
    def verdict(self) -> Verdict:
        return Verdict.Violated if self.violation_count > 0 else Verdict.NoViolationFound

    def to_dict(self) -> dict:
        from .fileio import joint_to_dict

        return {
            "axiom": self.axiom.value,
            "seed": self.seed,
            "trials": self.trials,
            "constructions": self.constructions,
            "preconditions_found": self.preconditions_found,
            "violation_count": self.violation_count,
            "verdict": self.verdict.value,
            "violations": [
                {
                    "trial": v.trial,
                    "alpha": v.alpha,
                    "note": v.note,
                    "lotteries": {name: joint_to_dict(P) for name, P in v.lotteries},
                    "observed": [
                        {"left": r.left, "right": r.right, "relation": r.relation.value}
                        for r in v.observed
                    ],
                }
                for v in self.violations
            ],
        }


def format_axiom_report(report: AxiomReport) -> str:
    lines = [
        f"axiom {report.axiom.value}: {report.verdict.value}",
        f"  trials {report.trials}, constructed {report.constructions}, "
        f"preconditions met {report.preconditions_found}, "
        f"violations {report.violation_count}",
    ]
    for v in report.violations:
        head = f"  counterexample (trial {v.trial}"
        if v.alpha is not None:
            head += f", alpha={v.alpha}"
        head += f"): {v.note}" if v.note else "):"
        lines.append(head)
        for rec in v.observed:
            lines.append(f"    {rec.left} vs {rec.right}: {rec.relation.value}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Sampling primitives
# ---------------------------------------------------------------------------


def _substream(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _pick(rng: np.random.Generator, seq: Sequence) -> object:
    return seq[int(rng.integers(len(seq)))]


def _distinct(rng: np.random.Generator, pts: Sequence[float], n: int) -> list[float]:
    idx = rng.choice(len(pts), size=n, replace=False)
    return [pts[int(i)] for i in idx]


def _rand_marginal(
    rng: np.random.Generator,
    cfg: SamplerConfig,
    pts: Sequence[float],
    source: int,
    min_size: int = 1,
) -> MarginalLottery:
    n = int(rng.integers(min_size, cfg.max_support + 1))
    outs = _distinct(rng, pts, n)
    probs = rng.dirichlet(np.ones(n))
    return make_marginal(zip(outs, probs), source=source)


def _rand_product(rng, cfg, pts) -> JointLottery:
    return product(
        _rand_marginal(rng, cfg, pts, 1), _rand_marginal(rng, cfg, pts, 2)
    )


def _rand_joint(rng, cfg, pts) -> JointLottery:
    n = int(rng.integers(1, cfg.max_support + 1))
    xs = [_pick(rng, pts) for _ in range(n)]
    ys = [_pick(rng, pts) for _ in range(n)]
    probs = rng.dirichlet(np.ones(n))
    return make_joint(zip(xs, ys, probs))


def _dj(x: float, y: float) -> JointLottery:
    return degenerate_joint(x, y)


def _embed(p: MarginalLottery) -> JointLottery:
    """Narrow view: pair ``p`` with a sure 0 in the other source."""
    if p.source == 1:
        return product(p, delta(0.0, source=2))
    return product(delta(0.0, source=1), p)


def _relabel(p: MarginalLottery, source: int) -> MarginalLottery:
    return make_marginal(p.entries, source=source)


def _gap(pref: Preference) -> float:
    return pref.value_p - pref.value_q


def _scale(pref: Preference) -> float:
    return max(1.0, abs(pref.value_p), abs(pref.value_q))


def _margin(oracle: PreferenceOracle, cfg: SamplerConfig, pref: Preference) -> float:
    return cfg.margin_factor * oracle.band * _scale(pref)


def _strict_by_margin(oracle, cfg, pref: Preference) -> bool:
    return pref.relation is Relation.StrictlyPrefers and _gap(pref) > _margin(
        oracle, cfg, pref
    )


def _direction(oracle, cfg, pref: Preference) -> int:
    """+1 / -1 when strict beyond the margin, else 0."""
    g = _gap(pref)
    m = _margin(oracle, cfg, pref)
    if pref.relation is Relation.StrictlyPrefers and g > m:
        return 1
    if pref.relation is Relation.StrictlyDispreferred and g < -m:
        return -1
    return 0


def _weak_premise(oracle, cfg, pref: Preference) -> bool:
    """Usable as a weak-preference premise: margin-strict or indifferent."""
    return pref.relation is Relation.Indifferent or _strict_by_margin(oracle, cfg, pref)


def _oriented(oracle, cfg, A: JointLottery, B: JointLottery):
    """Return (better, worse, preference) when the gap clears the margin."""
    pref = oracle(A, B)
    if _strict_by_margin(oracle, cfg, pref):
        return A, B, pref
    flipped = Preference(
        relation=Relation.StrictlyPrefers,
        value_p=pref.value_q,
        value_q=pref.value_p,
        band=pref.band,
    )
    if pref.relation is Relation.StrictlyDispreferred and _strict_by_margin(
        oracle, cfg, flipped
    ):
        return B, A, flipped
    return None


def _solve_outcome(
    oracle: PreferenceOracle,
    build: Callable[[float], JointLottery],
    target: JointLottery,
    lo: float,
    hi: float,
) -> Optional[float]:
    """Outcome t with build(t) indifferent to target, or None.

    Assumes build is increasing in t (it always is here: t is a sure
    outcome under a monotone oracle).  Root-finding runs on the oracle's
    reported value gap, so no model internals are consulted.
    """

    def g(t: float) -> float:
        return _gap(oracle(build(t), target))

    glo, ghi = g(lo), g(hi)
    if glo > 0.0 or ghi < 0.0:
        return None
    if glo == 0.0 and ghi == 0.0:
        root = lo
    else:
        try:
            root = brentq(g, lo, hi, xtol=1e-13, maxiter=200)
        except ValueError:
            return None
    if oracle(build(root), target).relation is Relation.Indifferent:
        return float(root)
    return None


def _narrow_ce(
    oracle: PreferenceOracle, cfg: SamplerConfig, p: MarginalLottery
) -> Optional[float]:
    """Sure outcome the oracle's narrow (other-source-at-0) view deems equal to p."""
    support = [x for x, _ in p.entries]
    if len(support) == 1:
        return support[0]
    lo, hi = min(support), max(support)
    return _solve_outcome(
        oracle, lambda t: _embed(delta(t, source=p.source)), _embed(p), lo, hi
    )


# ---------------------------------------------------------------------------
# Trial driver
# ---------------------------------------------------------------------------


class _Tally:
    def __init__(self, cfg: SamplerConfig) -> None:
        self.cfg = cfg
        self.trials = 0
        self.constructions = 0
        self.found = 0
        self.count = 0
        self.recorded: list[Violation] = []

    def add(self, violations: Sequence[Violation]) -> None:
        self.found += 1
        self.count += len(violations)
        for v in violations:
            if len(self.recorded) < self.cfg.max_recorded:
                self.recorded.append(v)

    def report(self, axiom: AxiomId) -> AxiomReport:
        if self.constructions == 0:
            raise PreconditionSamplerExhausted(
                f"{axiom.value}: could not construct a single premise tuple "
                f"in {self.trials} trials; widen the grid or raise trials"
            )
        return AxiomReport(
            axiom=axiom,
            seed=self.cfg.seed,
            trials=self.trials,
            constructions=self.constructions,
            preconditions_found=self.found,
            violation_count=self.count,
            violations=tuple(self.recorded),
        )


def _run_sampled(axiom, oracle, cfg, trial_fn) -> AxiomReport:
    tally = _Tally(cfg)
    pts = cfg.grid()
    for t in range(cfg.trials):
        tally.trials += 1
        rng = _substream(cfg.seed, (t,))
        outcome = trial_fn(oracle, cfg, rng, pts, t)
        if outcome is None:
            continue
        built, violations = outcome
        if built:
            tally.constructions += 1
        if violations is not None:
            tally.add(violations)
    return tally.report(axiom)


def _mixture_conclusions(
    oracle, cfg, trial, labeled, better, worse, mate_b, mate_w, premises, note
) -> list[Violation]:
    """Check alpha*better+(1-alpha)*mate_b > alpha*worse+(1-alpha)*mate_w for all alphas."""
    out = []
    for alpha in cfg.weights:
        A = mix(alpha, better, mate_b)
        B = mix(alpha, worse, mate_w)
        pref = oracle(A, B)
        if pref.relation is not Relation.StrictlyPrefers:
            out.append(
                Violation(
                    trial=trial,
                    alpha=alpha,
                    lotteries=tuple(labeled) + (("mixA", A), ("mixB", B)),
                    observed=tuple(premises)
                    + (ComparisonRecord("mixA", "mixB", pref.relation),),
                    note=note,
                )
            )
    return out


# ---------------------------------------------------------------------------
# Checkers: structural axioms
# ---------------------------------------------------------------------------


def _trial_monotonicity(oracle, cfg, rng, pts, t):
    P = _rand_joint(rng, cfg, pts) if rng.random() < 0.5 else _rand_product(rng, cfg, pts)
    xs = [x for x, _, _ in P.entries]
    ys = [y for _, y, _ in P.entries]
    mode = int(rng.integers(3))
    k = float(rng.integers(1, 3)) * cfg.step
    if mode == 0:
        point = (min(xs) - k, min(ys) - k)
    elif mode == 1:
        point = (max(xs) + k, max(ys) + k)
    else:
        point = (min(xs), min(ys))
    if not (cfg.lo <= point[0] <= cfg.hi and cfg.lo <= point[1] <= cfg.hi):
        return None
    dom = dominance(P, *point)
    if dom is Dominance.Neither:
        return None
    pref = oracle(P, _dj(*point))
    expected = (
        Relation.StrictlyPrefers
        if dom is Dominance.DominatesPoint
        else Relation.StrictlyDispreferred
    )
    if pref.relation is expected:
        return True, []
    v = Violation(
        trial=t,
        alpha=None,
        lotteries=(("P", P), ("point", _dj(*point))),
        observed=(ComparisonRecord("P", "point", pref.relation),),
        note=f"P {dom.value}; expected {expected.value}",
    )
    return True, [v]


def _trial_independence(oracle, cfg, rng, pts, t):
    P = _rand_product(rng, cfg, pts)
    Q = _rand_product(rng, cfg, pts)
    R = _rand_product(rng, cfg, pts)
    oriented = _oriented(oracle, cfg, P, Q)
    if oriented is None:
        return True, None
    better, worse, pref = oriented
    labeled = [("P", better), ("Q", worse), ("R", R)]
    premises = [ComparisonRecord("P", "Q", pref.relation)]
    return True, _mixture_conclusions(
        oracle, cfg, t, labeled, better, worse, R, R, premises,
        "independence: mixing with common R must preserve strict preference",
    )


def _trial_bi_independence(oracle, cfg, rng, pts, t):
    R = _rand_product(rng, cfg, pts)
    s1 = _rand_marginal(rng, cfg, pts, 1)
    root = _solve_outcome(
        oracle, lambda u: product(s1, delta(u, source=2)), R, cfg.lo, cfg.hi
    )
    if root is None:
        return None
    S = product(s1, delta(root, source=2))
    P = _rand_product(rng, cfg, pts)
    Q = _rand_product(rng, cfg, pts)
    oriented = _oriented(oracle, cfg, P, Q)
    if oriented is None:
        return True, None
    better, worse, pref = oriented
    labeled = [("P", better), ("Q", worse), ("R", R), ("S", S)]
    premises = [
        ComparisonRecord("P", "Q", pref.relation),
        ComparisonRecord("R", "S", oracle(R, S).relation),
    ]
    return True, _mixture_conclusions(
        oracle, cfg, t, labeled, better, worse, R, S, premises,
        "bi-independence: strict premise plus indifferent pair must mix strictly",
    )


def _trial_correlation_neglect(oracle, cfg, rng, pts, t):
    P = _rand_joint(rng, cfg, pts)
    if is_product(P):
        return True, None
    marg = product(marginal(P, 1), marginal(P, 2))
    pref = oracle(P, marg)
    if pref.relation is Relation.Indifferent:
        return True, []
    v = Violation(
        trial=t,
        alpha=None,
        lotteries=(("P", P), ("productOfMarginals", marg)),
        observed=(ComparisonRecord("P", "productOfMarginals", pref.relation),),
        note="correlation neglect requires indifference to the product of marginals",
    )
    return True, [v]


def _assemble(shared_source: int, shared: MarginalLottery, free: MarginalLottery):
    if shared_source == 1:
        return product(shared, free)
    return product(free, shared)


def _trial_multilinear(oracle, cfg, rng, pts, t):
    i = 1 + int(rng.integers(2))
    j = 1 + int(rng.integers(2))
    p1 = _rand_marginal(rng, cfg, pts, 1)
    p2 = _rand_marginal(rng, cfg, pts, 2)
    P = product(p1, p2)
    r_other = _rand_marginal(rng, cfg, pts, 3 - i)
    R = _assemble(i, p1 if i == 1 else p2, r_other)
    q1 = _rand_marginal(rng, cfg, pts, 1)
    q2 = _rand_marginal(rng, cfg, pts, 2)
    Q = product(q1, q2)
    shared_q = q1 if j == 1 else q2

    def build_S(u: float) -> JointLottery:
        return _assemble(j, shared_q, delta(u, source=3 - j))

    root = _solve_outcome(oracle, build_S, R, cfg.lo, cfg.hi)
    if root is None:
        return None
    S = build_S(root)
    oriented = _oriented(oracle, cfg, P, Q)
    if oriented is None:
        return True, None
    better, worse, pref = oriented
    mate_b, mate_w = (R, S) if better is P else (S, R)
    labeled = [("P", better), ("Q", worse), ("R", mate_b), ("S", mate_w)]
    premises = [
        ComparisonRecord("P", "Q", pref.relation),
        ComparisonRecord("R", "S", oracle(mate_b, mate_w).relation),
    ]
    return True, _mixture_conclusions(
        oracle, cfg, t, labeled, better, worse, mate_b, mate_w, premises,
        "multilinear independence: shared-marginal mixture must stay strict",
    )


def _trial_conditional_independence(oracle, cfg, rng, pts, t):
    src = 1 + int(rng.integers(2))
    s = float(_pick(rng, pts))
    free = 3 - src

    def anchored(m: MarginalLottery) -> JointLottery:
        return _assemble(src, delta(s, source=src), m)

    p = _rand_marginal(rng, cfg, pts, free)
    q = _rand_marginal(rng, cfg, pts, free)
    r = _rand_marginal(rng, cfg, pts, free)
    pref = oracle(anchored(p), anchored(q))
    if _direction(oracle, cfg, pref) == -1:
        p, q = q, p
        pref = oracle(anchored(p), anchored(q))
    if not _strict_by_margin(oracle, cfg, pref):
        return True, None
    labeled = [("sp", anchored(p)), ("sq", anchored(q))]
    premises = [ComparisonRecord("sp", "sq", pref.relation)]
    out = []
    for alpha in cfg.weights:
        A = anchored(mix_marginal(alpha, p, r))
        B = anchored(mix_marginal(alpha, q, r))
        concl = oracle(A, B)
        if concl.relation is not Relation.StrictlyPrefers:
            out.append(
                Violation(
                    trial=t,
                    alpha=alpha,
                    lotteries=tuple(labeled) + (("mixA", A), ("mixB", B)),
                    observed=tuple(premises)
                    + (ComparisonRecord("mixA", "mixB", concl.relation),),
                    note="conditional independence: mixing within the free source "
                    "under a fixed sure outcome must stay strict",
                )
            )
    return True, out


def _trial_weak_multilinear(oracle, cfg, rng, pts, t):
    sh = 1 + int(rng.integers(2))
    free = 3 - sh
    p_free = _rand_marginal(rng, cfg, pts, free, min_size=2)
    c_p = _narrow_ce(oracle, cfg, p_free)
    if c_p is None:
        return None
    q_free = _rand_marginal(rng, cfg, pts, free, min_size=2)
    c_q = _narrow_ce(oracle, cfg, q_free)
    if c_q is None:
        return None
    p_sh = _rand_marginal(rng, cfg, pts, sh)
    P = _assemble(sh, p_sh, p_free)
    R = _assemble(sh, p_sh, delta(c_p, source=free))

    def build_S(u: float) -> JointLottery:
        return _assemble(sh, delta(u, source=sh), delta(c_q, source=free))

    root = _solve_outcome(oracle, build_S, R, cfg.lo, cfg.hi)
    if root is None:
        return None
    S = build_S(root)
    Q = _assemble(sh, delta(root, source=sh), q_free)
    oriented = _oriented(oracle, cfg, P, Q)
    if oriented is None:
        return True, None
    better, worse, pref = oriented
    mate_b, mate_w = (R, S) if better is P else (S, R)
    labeled = [("P", better), ("Q", worse), ("R", mate_b), ("S", mate_w)]
    premises = [
        ComparisonRecord("P", "Q", pref.relation),
        ComparisonRecord("R", "S", oracle(mate_b, mate_w).relation),
    ]
    return True, _mixture_conclusions(
        oracle, cfg, t, labeled, better, worse, mate_b, mate_w, premises,
        "weak multilinear independence: narrowly-equivalent replacements "
        "must leave the strict mixture ranking intact",
    )


def _trial_correlation_consistency(forward: bool):
    def trial(oracle, cfg, rng, pts, t):
        x1, x2 = sorted(_distinct(rng, pts, 2))
        y1, y2 = sorted(_distinct(rng, pts, 2))
        anti = make_joint([(x1, y2, 0.5), (x2, y1, 0.5)])
        como = make_joint([(x1, y1, 0.5), (x2, y2, 0.5)])
        oriented = _oriented(oracle, cfg, anti, como)
        if oriented is None:
            return True, None
        better, worse, pref = oriented
        if forward:
            # Disjointness constraint sits on source 2; half the trials force
            # a source-1 overlap, which is where one-sided bracketing bites.
            off2 = [v for v in pts if v not in (y1, y2)]
            if len(off2) < 2:
                return None
            b, d = _distinct(rng, off2, 2)
            if rng.random() < 0.5:
                a = float(_pick(rng, (x1, x2)))
            else:
                a = float(_pick(rng, pts))
            R = _dj(a, b)
            root = _solve_outcome(oracle, lambda u: _dj(u, d), R, cfg.lo, cfg.hi)
            if root is None:
                return None
            S = _dj(root, d)
        else:
            off1 = [v for v in pts if v not in (x1, x2)]
            if len(off1) < 2:
                return None
            a, c = _distinct(rng, off1, 2)
            b = float(_pick(rng, pts))
            R = _dj(a, b)
            root = _solve_outcome(oracle, lambda u: _dj(c, u), R, cfg.lo, cfg.hi)
            if root is None:
                return None
            S = _dj(c, root)
        labeled = [("P", better), ("Q", worse), ("R", R), ("S", S)]
        premises = [
            ComparisonRecord("P", "Q", pref.relation),
            ComparisonRecord("R", "S", oracle(R, S).relation),
        ]
        which = "forward " if forward else ""
        return True, _mixture_conclusions(
            oracle, cfg, t, labeled, better, worse, R, S, premises,
            f"{which}correlation consistency: support-disjoint sweetener must "
            "preserve the strict ranking of equally-distributed couplings",
        )

    return trial


# ---------------------------------------------------------------------------
# Checkers: sure-outcome axioms (grid enumeration)
# ---------------------------------------------------------------------------


def _run_enumerated(axiom, oracle, cfg, cases, check) -> AxiomReport:
    tally = _Tally(cfg)
    for case in cases:
        tally.trials += 1
        tally.constructions += 1
        violations = check(case, tally.trials - 1)
        tally.add(violations)
    return tally.report(axiom)


def _thinned(seq: list, cap: int) -> list:
    if len(seq) <= cap:
        return seq
    stride = math.ceil(len(seq) / cap)
    return seq[::stride]


def _check_broad_bracketing_no_risk(oracle, cfg, params) -> AxiomReport:
    pts = cfg.grid()
    cases = [
        (x, y)
        for x in pts
        for y in pts
        if cfg.lo <= x + y <= cfg.hi
    ]
    cases = _thinned(cases, max(cfg.trials, 1))

    def check(case, t):
        x, y = case
        paired = _dj(x, y)
        out = []
        for name, other in (
            ("allFirst", _dj(x + y, 0.0)),
            ("allSecond", _dj(0.0, x + y)),
        ):
            pref = oracle(paired, other)
            if pref.relation is not Relation.Indifferent:
                out.append(
                    Violation(
                        trial=t,
                        alpha=None,
                        lotteries=(("paired", paired), (name, other)),
                        observed=(ComparisonRecord("paired", name, pref.relation),),
                        note="sure outcomes must be bracketed by their sum",
                    )
                )
        return out

    return _run_enumerated(AxiomId.BroadBracketingNoRisk, oracle, cfg, cases, check)


def _check_correlation_aversion(oracle, cfg, params) -> AxiomReport:
    pts = cfg.grid()
    pairs = [(a, b) for ai, a in enumerate(pts) for b in pts[ai + 1:]]
    cases = [(x1, x2, y1, y2) for x1, x2 in pairs for y1, y2 in pairs]

    def check(case, t):
        x1, x2, y1, y2 = case
        anti = make_joint([(x1, y2, 0.5), (x2, y1, 0.5)])
        como = make_joint([(x1, y1, 0.5), (x2, y2, 0.5)])
        pref = oracle(anti, como)
        if pref.relation is not Relation.StrictlyDispreferred:
            return []
        return [
            Violation(
                trial=t,
                alpha=None,
                lotteries=(("anticomonotone", anti), ("comonotone", como)),
                observed=(
                    ComparisonRecord("anticomonotone", "comonotone", pref.relation),
                ),
                note="hedged (anticomonotone) coupling must be weakly preferred",
            )
        ]

    return _run_enumerated(AxiomId.CorrelationAversion, oracle, cfg, cases, check)


def _check_long_run_risk_aversion(oracle, cfg, params) -> AxiomReport:
    pts = cfg.grid()
    cases = [(a, b) for ai, a in enumerate(pts) for b in pts[ai + 1:]]

    def check(case, t):
        x1, x2 = case
        coin1 = make_marginal([(x1, 0.5), (x2, 0.5)], source=1)
        coin2 = make_marginal([(x1, 0.5), (x2, 0.5)], source=2)
        independent = product(coin1, coin2)
        persistent = make_joint([(x1, x1, 0.5), (x2, x2, 0.5)])
        pref = oracle(independent, persistent)
        if pref.relation is not Relation.StrictlyDispreferred:
            return []
        return [
            Violation(
                trial=t,
                alpha=None,
                lotteries=(("independent", independent), ("persistent", persistent)),
                observed=(
                    ComparisonRecord("independent", "persistent", pref.relation),
                ),
                note="independent draws must be weakly preferred to a single "
                "perfectly persistent draw",
            )
        ]

    return _run_enumerated(AxiomId.LongRunRiskAversion, oracle, cfg, cases, check)


# ---------------------------------------------------------------------------
# Checkers: two-scenario agreement axioms
# ---------------------------------------------------------------------------


def _reversal_violation(t, labeled, recs, note):
    return [Violation(trial=t, alpha=None, lotteries=tuple(labeled), observed=tuple(recs), note=note)]


def _trial_narrow_swap(note):
    """Shared engine for Symmetry and Stationarity.

    Both require the ranking of a lottery pair to agree across the two
    sources when the other source pays a sure 0; they differ only in the
    story (mirror-image gambles vs a common delay).
    """

    def trial(oracle, cfg, rng, pts, t):
        p = _rand_marginal(rng, cfg, pts, 2)
        q = _rand_marginal(rng, cfg, pts, 2)
        late = oracle(_embed(p), _embed(q))
        A1 = _embed(_relabel(p, 1))
        B1 = _embed(_relabel(q, 1))
        early = oracle(A1, B1)
        d_late = _direction(oracle, cfg, late)
        d_early = _direction(oracle, cfg, early)
        if d_late * d_early == -1:
            labeled = [
                ("pSource2", _embed(p)),
                ("qSource2", _embed(q)),
                ("pSource1", A1),
                ("qSource1", B1),
            ]
            recs = [
                ComparisonRecord("pSource2", "qSource2", late.relation),
                ComparisonRecord("pSource1", "qSource1", early.relation),
            ]
            return True, _reversal_violation(t, labeled, recs, note)
        return True, []

    return trial


def _trial_history_independence(oracle, cfg, rng, pts, t):
    x, y = _distinct(rng, pts, 2)
    p = _rand_marginal(rng, cfg, pts, 2)
    q = _rand_marginal(rng, cfg, pts, 2)
    at_x = oracle(product(delta(x, 1), p), product(delta(x, 1), q))
    at_y = oracle(product(delta(y, 1), p), product(delta(y, 1), q))
    if _direction(oracle, cfg, at_x) * _direction(oracle, cfg, at_y) == -1:
        labeled = [
            ("xp", product(delta(x, 1), p)),
            ("xq", product(delta(x, 1), q)),
            ("yp", product(delta(y, 1), p)),
            ("yq", product(delta(y, 1), q)),
        ]
        recs = [
            ComparisonRecord("xp", "xq", at_x.relation),
            ComparisonRecord("yp", "yq", at_y.relation),
        ]
        return True, _reversal_violation(
            t, labeled, recs,
            "continuation ranking flipped between two sure first-period outcomes",
        )
    return True, []


# ---------------------------------------------------------------------------
# Checkers: recursive-structure axioms
# ---------------------------------------------------------------------------


def _trial_recursivity(oracle, cfg, rng, pts, t):
    n = 2 + int(rng.integers(2))
    xs = _distinct(rng, pts, n)
    xps = _distinct(rng, pts, n)
    qs = [_rand_marginal(rng, cfg, pts, 2) for _ in range(n)]
    qps = [_rand_marginal(rng, cfg, pts, 2) for _ in range(n)]
    prefs = [
        oracle(product(delta(xs[i], 1), qs[i]), product(delta(xps[i], 1), qps[i]))
        for i in range(n)
    ]
    if not all(_weak_premise(oracle, cfg, pr) for pr in prefs):
        return True, None
    any_strict = any(_strict_by_margin(oracle, cfg, pr) for pr in prefs)
    pi = rng.dirichlet(np.ones(n))
    A = make_joint(
        [(xs[i], y, pi[i] * w) for i in range(n) for y, w in qs[i].entries]
    )
    B = make_joint(
        [(xps[i], y, pi[i] * w) for i in range(n) for y, w in qps[i].entries]
    )
    concl = oracle(A, B)
    bad_reversal = _direction(oracle, cfg, concl) == -1
    bad_tie = any_strict and concl.relation is Relation.Indifferent
    if not (bad_reversal or bad_tie):
        return True, []
    labeled = [("compound", A), ("compoundPrime", B)]
    recs = [ComparisonRecord("compound", "compoundPrime", concl.relation)]
    for i in range(n):
        labeled += [
            (f"branch{i}", product(delta(xs[i], 1), qs[i])),
            (f"branchPrime{i}", product(delta(xps[i], 1), qps[i])),
        ]
        recs.append(ComparisonRecord(f"branch{i}", f"branchPrime{i}", prefs[i].relation))
    note = (
        "branchwise weakly-preferred compound ranked strictly worse"
        if bad_reversal
        else "some branch strictly preferred but compound only indifferent"
    )
    return True, _reversal_violation(t, labeled, recs, note)


def _trial_ordinal_dominance(oracle, cfg, rng, pts, t):
    n = 2 + int(rng.integers(2))
    pi = rng.dirichlet(np.ones(n))
    if rng.random() < 0.5:
        # Shared sure first-period outcome; risk sits in the second period.
        c, cp = _distinct(rng, pts, 2)
        bs = _distinct(rng, pts, n)
        as_ = []
        for b in bs:
            root = _solve_outcome(
                oracle, lambda u: _dj(c, u), _dj(cp, b), cfg.lo, cfg.hi
            )
            if root is None:
                return None
            as_.append(root)
        if rng.random() < 0.5:
            k = int(rng.integers(n))
            as_[k] = min(as_[k] + cfg.step, cfg.hi)
        prefs = [oracle(_dj(c, as_[i]), _dj(cp, bs[i])) for i in range(n)]
        if not all(_weak_premise(oracle, cfg, pr) for pr in prefs):
            return True, None
        A = product(delta(c, 1), make_marginal(zip(as_, pi), source=2))
        B = product(delta(cp, 1), make_marginal(zip(bs, pi), source=2))
        pair_lots = [(f"sure{i}", _dj(c, as_[i])) for i in range(n)]
        pair_lots += [(f"surePrime{i}", _dj(cp, bs[i])) for i in range(n)]
    else:
        # Distinct first-period outcomes on both sides.
        xs = _distinct(rng, pts, n)
        ys = _distinct(rng, pts, n)
        x2s = [float(_pick(rng, pts)) for _ in range(n)]
        y2s = [float(_pick(rng, pts)) for _ in range(n)]
        prefs = [oracle(_dj(xs[i], x2s[i]), _dj(ys[i], y2s[i])) for i in range(n)]
        if not all(_weak_premise(oracle, cfg, pr) for pr in prefs):
            return True, None
        A = make_joint([(xs[i], x2s[i], pi[i]) for i in range(n)])
        B = make_joint([(ys[i], y2s[i], pi[i]) for i in range(n)])
        pair_lots = [(f"sure{i}", _dj(xs[i], x2s[i])) for i in range(n)]
        pair_lots += [(f"surePrime{i}", _dj(ys[i], y2s[i])) for i in range(n)]
    concl = oracle(A, B)
    if _direction(oracle, cfg, concl) != -1:
        return True, []
    labeled = [("mixture", A), ("mixturePrime", B)] + pair_lots
    recs = [ComparisonRecord("mixture", "mixturePrime", concl.relation)]
    recs += [
        ComparisonRecord(f"sure{i}", f"surePrime{i}", prefs[i].relation)
        for i in range(len(prefs))
    ]
    return True, _reversal_violation(
        t, labeled, recs,
        "statewise weakly-dominant mixture ranked strictly worse",
    )


def _check_du_no_risk(oracle, cfg, params) -> AxiomReport:
    if (
        not isinstance(params, tuple)
        or len(params) != 2
        or not isinstance(params[0], UtilityIndex)
    ):
        raise ValueError(
            "discounted-utility-no-risk needs params=(u, beta): the candidate "
            "index and discount factor to test against the oracle"
        )
    u, beta = params

    def trial(oracle, cfg, rng, pts, t):
        x1, x2, y1, y2 = (float(_pick(rng, pts)) for _ in range(4))
        terms = (u(x1), beta * u(x2), u(y1), beta * u(y2))
        s = terms[0] + terms[1] - terms[2] - terms[3]
        scale = max(1.0, *(abs(v) for v in terms))
        if abs(s) <= 1e-8 * scale:
            return True, None
        pref = oracle(_dj(x1, x2), _dj(y1, y2))
        expected = Relation.StrictlyPrefers if s > 0 else Relation.StrictlyDispreferred
        if pref.relation is expected:
            return True, []
        labeled = [("path", _dj(x1, x2)), ("pathPrime", _dj(y1, y2))]
        recs = [ComparisonRecord("path", "pathPrime", pref.relation)]
        return True, _reversal_violation(
            t, labeled, recs,
            f"discounted utility predicts {expected.value} "
            f"(score {s:+.6g}) but the oracle disagrees",
        )

    return _run_sampled(AxiomId.DiscountedUtilityNoRisk, oracle, cfg, trial)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


_SAMPLED = {
    AxiomId.Monotonicity: _trial_monotonicity,
    AxiomId.Independence: _trial_independence,
    AxiomId.BiIndependence: _trial_bi_independence,
    AxiomId.CorrelationNeglect: _trial_correlation_neglect,
    AxiomId.MultilinearIndependence: _trial_multilinear,
    AxiomId.ConditionalIndependence: _trial_conditional_independence,
    AxiomId.WeakMultilinearIndependence: _trial_weak_multilinear,
    AxiomId.CorrelationConsistency: _trial_correlation_consistency(forward=False),
    AxiomId.ForwardCorrelationConsistency: _trial_correlation_consistency(forward=True),
    AxiomId.Symmetry: _trial_narrow_swap(
        "mirror-image sure-zero rankings disagree across sources"
    ),
    AxiomId.Stationarity: _trial_narrow_swap(
        "delayed and immediate rankings of the same lottery pair disagree"
    ),
    AxiomId.HistoryIndependence: _trial_history_independence,
    AxiomId.Recursivity: _trial_recursivity,
    AxiomId.OrdinalDominance: _trial_ordinal_dominance,
}

_ENUMERATED = {
    AxiomId.BroadBracketingNoRisk: _check_broad_bracketing_no_risk,
    AxiomId.CorrelationAversion: _check_correlation_aversion,
    AxiomId.LongRunRiskAversion: _check_long_run_risk_aversion,
    AxiomId.DiscountedUtilityNoRisk: _check_du_no_risk,
}


def check_axiom(
    axiom: AxiomId,
    oracle: PreferenceOracle,
    cfg: Optional[SamplerConfig] = None,
    *,
    params: object = None,
) -> AxiomReport:
    """Hunt for counterexamples to ``axiom`` under ``oracle``.

    Args:
        axiom: which axiom to stress.
        oracle: total comparator under test.
        cfg: sampling plan; defaults to the money grid with seed 0.
        params: extra checker inputs.  Only discounted-utility-no-risk
            uses this, as the candidate pair (u, beta).

    Returns:
        AxiomReport with verdict Violated or NoViolationFound.

    Raises:
        PreconditionSamplerExhausted: not a single structural premise
            tuple could be built, so the run says nothing at all.
    """
    cfg = cfg or SamplerConfig()
    if axiom in _ENUMERATED:
        return _ENUMERATED[axiom](oracle, cfg, params)
    return _run_sampled(axiom, oracle, cfg, _SAMPLED[axiom])


# ---------------------------------------------------------------------------
# Bracketing classifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BracketingReport:
    """Where (if anywhere) each source's risk matters beyond its sure equivalent.

    ``sigma2`` collects source-2 outcomes at which two narrowly-equivalent
    source-1 lotteries are ranked strictly apart (so source-1 risk is being
    carried across), and symmetrically for ``sigma1``.  Cells are hulls of
    consecutive witnessed grid points.  Undetected points are labeled
    narrow-with-no-witness rather than narrow: absence of a witness at a
    finite probe budget is not proof.
    """

    label: str
    probes1: tuple[float, ...]
    probes2: tuple[float, ...]
    detected1: tuple[bool, ...]
    detected2: tuple[bool, ...]
    sigma1_cells: tuple[tuple[float, float], ...]
    sigma2_cells: tuple[tuple[float, float], ...]
    witnesses: tuple[Violation, ...] = ()

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "probes1": list(self.probes1),
            "probes2": list(self.probes2),
            "detected1": list(self.detected1),
            "detected2": list(self.detected2),
            "sigma1_cells": [list(c) for c in self.sigma1_cells],
            "sigma2_cells": [list(c) for c in self.sigma2_cells],
        }


def _cells(points: Sequence[float], hits: Sequence[bool]) -> tuple:
    out = []
    run: list[float] = []
    for p, h in zip(points, hits):
        if h:
            run.append(p)
        elif run:
            out.append((run[0], run[-1]))
            run = []
    if run:
        out.append((run[0], run[-1]))
    return tuple(out)


def classify_bracketing(
    oracle: PreferenceOracle,
    cfg: Optional[SamplerConfig] = None,
    *,
    probes: int = 3,
) -> BracketingReport:
    """Estimate the broad-bracketing regions of an oracle on the grid.

    For each interior grid point y in source 2, the classifier builds a
    two-point source-1 lottery p, finds the sure outcome c the oracle's
    narrow source-1 view deems equal to p, and asks whether pairing both
    with a sure y breaks the tie.  A strict verdict witnesses that
    source-1 risk matters at y.  Source 1 is probed symmetrically.

    Labels: BroadEverywhere, NarrowSource1 (source-1 risk never separated),
    NarrowSource2, NarrowBoth, or Mixed when witnesses cover part of a
    source's grid, with the witnessed hull as the region estimate.
    """
    cfg = cfg or SamplerConfig()
    pts = cfg.grid()
    interior = tuple(p for p in pts[1:-1] if p != 0.0)
    witnesses: list[Violation] = []

    def probe(witness_source: int) -> tuple:
        # witness_source is the source whose risk we test for carrying over.
        other = 3 - witness_source
        hits = []
        for pi, point in enumerate(interior):
            hit = False
            for k in range(probes):
                rng = _substream(cfg.seed, (witness_source, pi, k))
                outs = _distinct(rng, pts, 2)
                share = 0.25 + 0.5 * rng.random()
                p = make_marginal(
                    [(outs[0], share), (outs[1], 1.0 - share)], source=witness_source
                )
                c = _narrow_ce(oracle, cfg, p)
                if c is None:
                    continue
                anchored_p = _assemble(other, delta(point, source=other), p)
                anchored_c = _assemble(
                    other, delta(point, source=other), delta(c, source=witness_source)
                )
                pref = oracle(anchored_p, anchored_c)
                if (
                    pref.relation is not Relation.Indifferent
                    and abs(_gap(pref)) > 10.0 * oracle.band * _scale(pref)
                ):
                    hit = True
                    witnesses.append(
                        Violation(
                            trial=pi,
                            alpha=None,
                            lotteries=(
                                ("risky", anchored_p),
                                ("narrowEquivalent", anchored_c),
                            ),
                            observed=(
                                ComparisonRecord(
                                    "risky", "narrowEquivalent", pref.relation
                                ),
                            ),
                            note=f"source-{witness_source} risk separated at "
                            f"source-{other} outcome {point}",
                        )
                    )
                    break
            hits.append(hit)
        return tuple(hits)

    detected2 = probe(1)  # source-1 risk carried to source-2 outcomes
    detected1 = probe(2)

    full2, any2 = all(detected2), any(detected2)
    full1, any1 = all(detected1), any(detected1)
    if full1 and full2:
        label = "BroadEverywhere"
    elif not any1 and not any2:
        label = "NarrowBoth"
    elif not any2 and full1:
        label = "NarrowSource1"
    elif not any1 and full2:
        label = "NarrowSource2"
    else:
        label = "Mixed"

    return BracketingReport(
        label=label,
        probes1=interior,
        probes2=interior,
        detected1=detected1,
        detected2=detected2,
        sigma1_cells=_cells(interior, detected1),
        sigma2_cells=_cells(interior, detected2),
        witnesses=tuple(witnesses),
    )


def format_bracketing_report(report: BracketingReport) -> str:
    lines = [f"bracketing: {report.label}"]
    for name, cells, points, hits in (
        ("sigma1 (source-2 risk matters at source-1 outcome)", report.sigma1_cells,
         report.probes1, report.detected1),
        ("sigma2 (source-1 risk matters at source-2 outcome)", report.sigma2_cells,
         report.probes2, report.detected2),
    ):
        if cells:
            spans = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in cells)
            lines.append(f"  {name}: {spans}")
        else:
            lines.append(f"  {name}: empty on the probe grid")
        missed = [p for p, h in zip(points, hits) if not h]
        if missed and cells:
            lines.append(
                "    narrow (no witness found) at: "
                + ", ".join(f"{p:g}" for p in missed)
            )
    return "\n".join(lines)
