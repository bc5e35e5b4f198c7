"""Desk-scale replications of four bracketing phenomena.

Each experiment rebuilds its fixtures from scratch, runs the package's
own evaluators over them, and grades every quantity pass or fail against
a stated target.  The frozen reference numbers quoted in the details
were computed once with an independent high-precision script and are
kept to the digits that survive a float round trip.

The four experiments:

``tk1981``
    A pair of simultaneous gambles where choosing each in isolation
    picks a combined lottery that is strictly dominated.
``multilinear``
    Two indifference-preserving mixtures that reverse a strict ranking
    under source-by-source evaluation.
``rabin``
    Rejection of a small actuarially favourable gamble at every wealth
    level, together with acceptance of a large one, under a single
    wealth-independent narrow evaluator.
``timing``
    The early-resolution premium: zero for the history-based recursive
    model on random trees, zero for the recursive certainty-equivalent
    model when curvature parameters match, positive otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .indices import AdditiveBivariate, Linear, LossAverseSqrt, Power, SumBivariate
from .lotteries import (
    fosd_strict,
    make_marginal,
    mix,
    money_aggregate,
    product,
)
from .models import EU, NB, Relation, compare, evaluate
from .models import ce as index_ce
from .temporal import build_iid_tree, timing_premium

__all__ = [
    "EXPERIMENTS",
    "CheckLine",
    "ExperimentReport",
    "run_experiment",
    "format_experiment_report",
]

EXPERIMENTS = ("tk1981", "multilinear", "rabin", "timing")


@dataclass(frozen=True)
class CheckLine:
    """One graded quantity: a label, a verdict, and the numbers behind it."""

    label: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    checks: tuple[CheckLine, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [
                {"label": c.label, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def format_experiment_report(report: ExperimentReport) -> str:
    lines = [f"experiment {report.name}: {'pass' if report.passed else 'FAIL'}"]
    for c in report.checks:
        lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.label}: {c.detail}")
    return "\n".join(lines)


def run_experiment(name: str, seed: int = 0) -> ExperimentReport:
    """Build and grade one named experiment.

    The seed only matters for ``timing``, which draws its random trees
    from it; the other three are fully deterministic.
    """
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown experiment {name!r}; choose from {EXPERIMENTS}"
        ) from None
    return ExperimentReport(name=name, checks=tuple(builder(seed)))


# ---------------------------------------------------------------------------
# tk1981: concurrent decisions, dominated combination
# ---------------------------------------------------------------------------

_TK_V = LossAverseSqrt(2.0)


def _tk_lotteries():
    a = make_marginal([(2.4, 1.0)], source=1)
    b = make_marginal([(10.0, 0.25), (0.0, 0.75)], source=1)
    c = make_marginal([(-7.5, 1.0)], source=2)
    d = make_marginal([(-10.0, 0.75), (0.0, 0.25)], source=2)
    return a, b, c, d


def _tk1981(seed: int):
    a, b, c, d = _tk_lotteries()
    for label, lot, want in (
        ("certainty equivalent of the sure gain", a, 2.40),
        ("certainty equivalent of the risky gain", b, 0.625),
        ("certainty equivalent of the sure loss", c, -7.50),
        ("certainty equivalent of the risky loss", d, -5.625),
    ):
        got = index_ce(_TK_V, lot)
        yield CheckLine(label, abs(got - want) <= 1e-9, f"{got:.10f}, target {want}")

    ad = product(a, d)
    bc = product(b, c)
    narrow = NB(AdditiveBivariate(Linear(), Linear()), _TK_V, _TK_V)
    pref = compare(narrow, ad, bc)
    yield CheckLine(
        "gamble-by-gamble evaluator picks the sure gain with the risky loss",
        pref.relation is Relation.StrictlyPrefers,
        f"{pref.value_p:.6f} vs {pref.value_q:.6f}",
    )

    dominated = fosd_strict(money_aggregate(bc), money_aggregate(ad))
    yield CheckLine(
        "the rejected combination strictly dominates the chosen one",
        dominated,
        "first-order stochastic dominance of the summed payoffs",
    )

    for label, u in (
        ("loss-averse curve", _TK_V),
        ("symmetric square root", LossAverseSqrt(1.0)),
        ("risk-neutral line", Linear()),
    ):
        pref = compare(EU(SumBivariate(u)), bc, ad)
        yield CheckLine(
            f"pooled evaluator with {label} picks the dominating combination",
            pref.relation is Relation.StrictlyPrefers,
            f"{pref.value_p:.6f} vs {pref.value_q:.6f}",
        )


# ---------------------------------------------------------------------------
# multilinear: mixtures that reverse a strict ranking
# ---------------------------------------------------------------------------


def _multilinear(seed: int):
    eps = 0.5
    model = NB(AdditiveBivariate(Linear(), Linear()), Power(0.5), Power(0.5))
    p1 = make_marginal([(25.0, 1.0)], source=1, lo=0.0)
    q1 = make_marginal([(16.0, 1.0)], source=1, lo=0.0)
    p2 = make_marginal([((4.0 + eps) ** 2, 1.0)], source=2, lo=0.0)
    q2 = make_marginal([(25.0, 1.0)], source=2, lo=0.0)
    r = make_marginal([(0.0, 1.0)], source=2, lo=0.0)
    s = make_marginal([(9.0, 1.0)], source=2, lo=0.0)

    pp, qq = product(p1, p2), product(q1, q2)
    pr, qs = product(p1, r), product(q1, s)

    pref = compare(model, pp, qq)
    yield CheckLine(
        "strict ranking of the top pair",
        pref.relation is Relation.StrictlyPrefers,
        f"{pref.value_p:.6f} vs {pref.value_q:.6f}",
    )
    pref = compare(model, pr, qs)
    yield CheckLine(
        "indifference of the padding pair",
        pref.relation is Relation.Indifferent,
        f"{pref.value_p:.6f} vs {pref.value_q:.6f}",
    )

    mp = mix(0.5, pp, pr)
    mq = mix(0.5, qq, qs)
    vp, vq = evaluate(model, mp), evaluate(model, mq)
    yield CheckLine(
        "half mixture on the preferred side",
        abs(vp - 30.0625) <= 1e-9,
        f"{vp:.10f}, target 30.0625",
    )
    yield CheckLine(
        "half mixture on the dispreferred side",
        abs(vq - 32.0) <= 1e-9,
        f"{vq:.10f}, target 32",
    )
    pref = compare(model, mp, mq)
    yield CheckLine(
        "mixing with indifferent padding reverses the strict ranking",
        pref.relation is Relation.StrictlyDispreferred,
        f"{pref.value_p:.6f} vs {pref.value_q:.6f}",
    )


# ---------------------------------------------------------------------------
# rabin: wealth-independent rejection of a favourable small gamble
# ---------------------------------------------------------------------------

_REJECT_SCORE = -30.8418497113  # v(1050) + v(-1000) under the lam=2 curve
_ACCEPT_SCORE = 0.0883745413  # v(80050) + v(-20000)


def _rabin(seed: int):
    v = LossAverseSqrt(2.0)
    model = NB(AdditiveBivariate(Linear(), Linear()), v, v)
    small = make_marginal([(-1000.0, 0.5), (1050.0, 0.5)], source=1)
    large = make_marginal([(-20000.0, 0.5), (80050.0, 0.5)], source=1)
    refuse = make_marginal([(0.0, 1.0)], source=1)
    wealths = [5000.0 * k for k in range(20)]

    for gamble, target, want, label in (
        (small, Relation.StrictlyDispreferred, _REJECT_SCORE, "small gamble rejected"),
        (large, Relation.StrictlyPrefers, _ACCEPT_SCORE, "large gamble accepted"),
    ):
        hits = sum(
            compare(
                model,
                product(gamble, make_marginal([(w, 1.0)], source=2)),
                product(refuse, make_marginal([(w, 1.0)], source=2)),
            ).relation
            is target
            for w in wealths
        )
        score = v.value(max(x for x, _ in gamble.entries)) + v.value(
            min(x for x, _ in gamble.entries)
        )
        sign_ok = (score > 0) == (target is Relation.StrictlyPrefers)
        yield CheckLine(
            f"{label} at all {len(wealths)} wealth levels",
            hits == len(wealths) and sign_ok and abs(score - want) <= 1e-9,
            f"{hits}/{len(wealths)} levels, utility gap {score:+.10f}",
        )


# ---------------------------------------------------------------------------
# timing: who pays for early resolution
# ---------------------------------------------------------------------------

_EXACT_PROBS = (
    (1.0,),
    (0.5, 0.5),
    (0.25, 0.75),
    (0.75, 0.25),
    (0.25, 0.25, 0.5),
    (0.5, 0.25, 0.25),
    (0.125, 0.375, 0.5),
)


def _random_tree(rng: random.Random):
    probs = rng.choice(_EXACT_PROBS)
    states = [(round(rng.uniform(0.8, 1.25), 3), p) for p in probs]
    steps = rng.randint(1, 4)
    c0 = rng.choice((0.5, 1.0, 2.0, 7.0))
    return build_iid_tree(c0, states, steps=steps)


def _timing(seed: int):
    rng = random.Random(seed)
    rhos = (-2.0, -1.0, -0.5, 0.3, 0.5, 0.9)
    betas = (0.9, 0.95, 0.97)

    worst_kmbib = 0.0
    worst_matched = 0.0
    for _ in range(50):
        tree = _random_tree(rng)
        rho = rng.choice(rhos)
        alpha = rng.choice(rhos)
        beta = rng.choice(betas)
        worst_kmbib = max(
            worst_kmbib, abs(timing_premium(tree, rho, alpha, beta, model="kmbib"))
        )
        worst_matched = max(
            worst_matched, abs(timing_premium(tree, rho, rho, beta))
        )
    yield CheckLine(
        "history-based value is timing-neutral on 50 random trees",
        worst_kmbib <= 1e-12,
        f"largest |premium| {worst_kmbib:.3e}, tolerance 1e-12",
    )
    yield CheckLine(
        "recursive value with matched curvature is timing-neutral",
        worst_matched <= 1e-10,
        f"largest |premium| {worst_matched:.3e}, tolerance 1e-10",
    )

    fixture = build_iid_tree(1.0, [(1.05, 0.5), (0.97, 0.5)], steps=4)
    got = timing_premium(fixture, 0.5, -9.0, 0.97)
    yield CheckLine(
        "recursive value with excess risk aversion pays for early resolution",
        got > 1e-6 and abs(got - 0.003534281726980208) <= 1e-9,
        f"premium {got:.10f}, reference 0.0035342817",
    )


_BUILDERS = {
    "tk1981": _tk1981,
    "multilinear": _multilinear,
    "rabin": _rabin,
    "timing": _timing,
}
