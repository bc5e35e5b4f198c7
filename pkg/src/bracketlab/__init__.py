"""bracketlab: two-source lotteries, bracketed preference models, axiom checks.

The package splits into six layers, importable directly or through the
re-exports below:

``lotteries``
    Finite-support one- and two-source lotteries, mixtures, products,
    marginals, conditionals, and stochastic-dominance helpers.
``indices``
    Scalar utility indices and bivariate aggregators, with certainty
    equivalents and inverses.
``models``
    The preference families over joint lotteries, plus ``evaluate``,
    ``compare``, and ``ce``.
``temporal``
    Two-period and multi-period consumption trees, recursive values,
    and the timing premium.
``axioms``
    Sampling-based axiom checks, counterexample verification, and
    bracketing-region classification.
``fitting`` / ``experiments`` / ``cli``
    Choice-dataset grid fitting, the graded replications, and the
    command-line front end.
"""

from .axioms import (
    AxiomId,
    AxiomReport,
    BracketingReport,
    PreferenceOracle,
    SamplerConfig,
    Verdict,
    check_axiom,
    classify_bracketing,
    format_axiom_report,
    format_bracketing_report,
    verify_violation,
)
from .errors import (
    BracketError,
    DegenerateParameters,
    DomainViolation,
    EmptySupport,
    NonProductLottery,
    NonpositiveScale,
    OutcomeNotInSupport,
    OutcomeOutOfBounds,
    PreconditionSamplerExhausted,
    ProbabilitySumOutOfTolerance,
    RangeViolation,
    SourceMismatch,
    SpaceMismatch,
)
from .experiments import (
    EXPERIMENTS,
    ExperimentReport,
    format_experiment_report,
    run_experiment,
)
from .fileio import (
    read_index,
    read_joint,
    read_marginal,
    read_model,
    read_tree,
    write_index,
    write_joint,
    write_marginal,
    write_model,
    write_tree,
)
from .fitting import (
    ChoiceDataset,
    FitResult,
    Observation,
    default_grids,
    fit_dataset,
    format_fit_results,
    load_dataset,
)
from .indices import (
    AdditiveBivariate,
    Affine,
    CESCRRABivariate,
    Exponential,
    Linear,
    LossAverseSqrt,
    Power,
    SumBivariate,
    Tabulated,
    TabulatedGridBivariate,
)
from .lotteries import (
    JointLottery,
    MarginalLottery,
    OutcomeSpace,
    conditional,
    delta,
    fosd_strict,
    fosd_weak,
    is_product,
    make_joint,
    make_marginal,
    marginal,
    mix,
    mix_marginal,
    money_aggregate,
    product,
)
from .models import (
    BIB,
    BIBCN,
    CRRACESKMBIB,
    EDU,
    EU,
    EUCN,
    FIB,
    FIBCN,
    GBIBCN,
    GFIBCN,
    KM,
    KMBIB,
    NB,
    LambdaMix,
    OpenSet1D,
    Preference,
    Relation,
    ce,
    compare,
    evaluate,
)
from .temporal import (
    TemporalTree,
    build_iid_tree,
    collapse_early,
    edu_value,
    ez_value,
    kmbib_value,
    timing_premium,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lotteries
    "JointLottery",
    "MarginalLottery",
    "OutcomeSpace",
    "make_joint",
    "make_marginal",
    "marginal",
    "conditional",
    "delta",
    "mix",
    "mix_marginal",
    "product",
    "is_product",
    "money_aggregate",
    "fosd_weak",
    "fosd_strict",
    # indices
    "Linear",
    "Affine",
    "Power",
    "Exponential",
    "LossAverseSqrt",
    "Tabulated",
    "SumBivariate",
    "AdditiveBivariate",
    "CESCRRABivariate",
    "TabulatedGridBivariate",
    # models
    "EU",
    "EUCN",
    "NB",
    "BIB",
    "BIBCN",
    "FIB",
    "FIBCN",
    "GBIBCN",
    "GFIBCN",
    "EDU",
    "KM",
    "KMBIB",
    "CRRACESKMBIB",
    "LambdaMix",
    "OpenSet1D",
    "Preference",
    "Relation",
    "evaluate",
    "compare",
    "ce",
    # temporal
    "TemporalTree",
    "build_iid_tree",
    "collapse_early",
    "ez_value",
    "kmbib_value",
    "edu_value",
    "timing_premium",
    # axioms
    "AxiomId",
    "AxiomReport",
    "BracketingReport",
    "PreferenceOracle",
    "SamplerConfig",
    "Verdict",
    "check_axiom",
    "verify_violation",
    "classify_bracketing",
    "format_axiom_report",
    "format_bracketing_report",
    # fileio
    "read_joint",
    "write_joint",
    "read_marginal",
    "write_marginal",
    "read_index",
    "write_index",
    "read_model",
    "write_model",
    "read_tree",
    "write_tree",
    # fitting and experiments
    "Observation",
    "ChoiceDataset",
    "FitResult",
    "load_dataset",
    "fit_dataset",
    "format_fit_results",
    "default_grids",
    "EXPERIMENTS",
    "ExperimentReport",
    "run_experiment",
    "format_experiment_report",
    # errors
    "BracketError",
    "EmptySupport",
    "ProbabilitySumOutOfTolerance",
    "OutcomeOutOfBounds",
    "OutcomeNotInSupport",
    "SpaceMismatch",
    "SourceMismatch",
    "DomainViolation",
    "RangeViolation",
    "NonpositiveScale",
    "NonProductLottery",
    "DegenerateParameters",
    "PreconditionSamplerExhausted",
]
