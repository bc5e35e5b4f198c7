"""Zero-one-loss fitting of preference families to binary choice data.

A choice dataset is a CSV of rows ``subject,lotteryA_path,lotteryB_path,
choice`` with choice one of ``A``, ``B`` or ``indifferent``; lottery paths
are resolved relative to the CSV file.  Fitting is an exhaustive search
over caller-supplied model grids, scoring each candidate by the number of
observations whose recorded choice differs from the model's banded
verdict.  No likelihoods, no smoothing: the loss is the count.

Ties are broken by (a) fewer free parameters, then (b) earlier position
in the grid (and, across families with equal parameter counts, earlier
position in the family list).  The parameter-count rule is what sends a
dataset fit equally well by the pooled and the source-by-source additive
model to the pooled one.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainViolation, NonProductLottery, RangeViolation
from .fileio import read_joint
from .lotteries import JointLottery
from .models import DEFAULT_BAND, ModelSpec, Relation, compare

__all__ = [
    "CHOICES",
    "FAMILY_PARAMS",
    "Observation",
    "ChoiceDataset",
    "FitResult",
    "load_dataset",
    "score_model",
    "fit_subject",
    "fit_dataset",
    "default_grids",
    "format_fit_results",
]

CHOICES = ("A", "B", "indifferent")

# Free parameters per family: the grid search dimensionality, used by the
# tie rule.  The index/aggregator objects each count as one parameter.
FAMILY_PARAMS = {
    "eu": 1,
    "eu-cn": 1,
    "nb": 3,
    "bib": 2,
    "bib-cn": 2,
    "fib": 2,
    "fib-cn": 2,
    "gbib-cn": 4,
    "gfib-cn": 4,
    "edu": 2,
    "km": 3,
    "km-bib": 3,
    "crra-ces-kmbib": 3,
    "lambda-mix": 2,
}

# Errors that mark an observation as outside a candidate's domain rather
# than as evidence against it.
_SKIP_ERRORS = (DomainViolation, NonProductLottery, RangeViolation)


@dataclass(frozen=True)
class Observation:
    """One recorded binary choice."""

    lottery_a: JointLottery
    lottery_b: JointLottery
    choice: str

    def __post_init__(self) -> None:
        if self.choice not in CHOICES:
            raise ValueError(
                f"choice must be one of {CHOICES}, got {self.choice!r}"
            )


@dataclass(frozen=True)
class ChoiceDataset:
    """Per-subject observation lists, in file order."""

    subjects: tuple[tuple[str, tuple[Observation, ...]], ...]

    def __post_init__(self) -> None:
        for name, obs in self.subjects:
            if not obs:
                raise ValueError(f"subject {name!r} has no observations")

    def __len__(self) -> int:
        return len(self.subjects)


@dataclass(frozen=True)
class FitResult:
    """Best grid point for one subject.

    ``verdicts`` holds the winning model's implied choice per observation
    ("A", "B", "indifferent", or "skipped" when the lottery pair falls
    outside the model's domain).  Skipped observations never count as
    violations; they are reported separately.
    """

    subject: str
    family: str
    model: ModelSpec
    violations: int
    observations: int
    skipped: int
    verdicts: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.violations <= self.observations:
            raise ValueError("violation count must lie within the observation count")


# ---------------------------------------------------------------------------
# Dataset loading
# ---------------------------------------------------------------------------


def load_dataset(path) -> ChoiceDataset:
    """Read a choice CSV, resolving lottery paths against its directory.

    A leading header row ``subject,lotteryA_path,lotteryB_path,choice`` is
    skipped if present.  Subjects keep their first-appearance order.
    """
    path = Path(path)
    base = path.parent
    order: list[str] = []
    rows: dict[str, list[Observation]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for k, row in enumerate(csv.reader(fh)):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{k + 1}: expected 4 columns, got {len(row)}")
            subject, a_path, b_path, choice = (cell.strip() for cell in row)
            if k == 0 and (subject, choice) == ("subject", "choice"):
                continue
            if choice not in CHOICES:
                raise ValueError(
                    f"{path}:{k + 1}: choice must be one of {CHOICES}, got {choice!r}"
                )
            obs = Observation(
                lottery_a=read_joint(base / a_path),
                lottery_b=read_joint(base / b_path),
                choice=choice,
            )
            if subject not in rows:
                order.append(subject)
                rows[subject] = []
            rows[subject].append(obs)
    if not order:
        raise ValueError(f"{path}: no observations")
    return ChoiceDataset(
        subjects=tuple((name, tuple(rows[name])) for name in order)
    )


# ---------------------------------------------------------------------------
# Scoring and search
# ---------------------------------------------------------------------------


def _implied_choice(model: ModelSpec, obs: Observation, band: float) -> str:
    try:
        pref = compare(model, obs.lottery_a, obs.lottery_b, band=band)
    except _SKIP_ERRORS:
        return "skipped"
    if pref.relation is Relation.StrictlyPrefers:
        return "A"
    if pref.relation is Relation.StrictlyDispreferred:
        return "B"
    return "indifferent"


def score_model(
    model: ModelSpec,
    observations: Sequence[Observation],
    band: float = DEFAULT_BAND,
) -> tuple[int, int, tuple[str, ...]]:
    """(violations, skipped, per-observation verdicts) for one candidate."""
    verdicts = tuple(_implied_choice(model, obs, band) for obs in observations)
    skipped = sum(1 for v in verdicts if v == "skipped")
    violations = sum(
        1
        for v, obs in zip(verdicts, observations)
        if v != "skipped" and v != obs.choice
    )
    return violations, skipped, verdicts


def fit_subject(
    subject: str,
    observations: Sequence[Observation],
    families: Sequence[str],
    grids: Mapping[str, Sequence[ModelSpec]],
    band: float = DEFAULT_BAND,
) -> FitResult:
    """Exhaustive search over every requested family's grid."""
    best: tuple[tuple[int, int, int], FitResult] | None = None
    for fam_rank, family in enumerate(families):
        if family not in FAMILY_PARAMS:
            raise ValueError(f"unknown family {family!r}")
        grid = tuple(grids.get(family, ()))
        if not grid:
            warnings.warn(f"family {family!r}: empty grid, omitted from the fit")
            continue
        for model in grid:
            if model.family != family:
                raise ValueError(
                    f"grid for {family!r} contains a {model.family!r} model"
                )
            violations, skipped, verdicts = score_model(model, observations, band)
            key = (violations, FAMILY_PARAMS[family], fam_rank)
            if best is None or key < best[0]:
                best = (
                    key,
                    FitResult(
                        subject=subject,
                        family=family,
                        model=model,
                        violations=violations,
                        observations=len(observations),
                        skipped=skipped,
                        verdicts=verdicts,
                    ),
                )
    if best is None:
        raise ValueError("every requested family had an empty grid")
    return best[1]


def fit_dataset(
    data: ChoiceDataset,
    families: Sequence[str],
    grids: Mapping[str, Sequence[ModelSpec]],
    band: float = DEFAULT_BAND,
) -> list[FitResult]:
    """One best-fit result per subject, in dataset order."""
    return [
        fit_subject(name, obs, families, grids, band)
        for name, obs in data.subjects
    ]


# ---------------------------------------------------------------------------
# Stock grids
# ---------------------------------------------------------------------------


def default_grids() -> dict[str, tuple[ModelSpec, ...]]:
    """Small money-outcome battery: pooled, source-by-source, and blended.

    The curvature grid is the loss-averse square root at a handful of
    loss-aversion weights plus the risk-neutral line.  Kept deliberately
    coarse; callers with a real design should pass their own grids.
    """
    from .indices import AdditiveBivariate, Linear, LossAverseSqrt, SumBivariate
    from .models import EU, EUCN, NB, LambdaMix

    lams = (1.0, 1.5, 2.0, 2.25, 3.0)
    curves = tuple(LossAverseSqrt(lam) for lam in lams) + (Linear(),)
    w_add = AdditiveBivariate(Linear(), Linear())
    return {
        "eu": tuple(EU(SumBivariate(u)) for u in curves),
        "eu-cn": tuple(EUCN(SumBivariate(u)) for u in curves),
        "nb": tuple(NB(w_add, u, u) for u in curves),
        "lambda-mix": tuple(
            LambdaMix(u, t) for u in curves for t in (0.0, 0.25, 0.5, 0.75, 1.0)
        ),
    }


def format_fit_results(results: Sequence[FitResult]) -> str:
    """Human-readable table; notes the tie rule the search applied."""
    lines = []
    for r in results:
        lines.append(
            f"{r.subject}: {r.family} "
            f"({r.violations}/{r.observations} violations"
            + (f", {r.skipped} skipped" if r.skipped else "")
            + ")"
        )
    lines.append("ties broken by fewer parameters, then grid order")
    return "\n".join(lines)
