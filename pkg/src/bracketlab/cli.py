"""Command-line front end.

One executable, nine subcommands: point evaluation (``eval``, ``ce``,
``compare``, ``tree-value``, ``timing-premium``), sampling suites
(``axioms``, ``classify-bracketing``), dataset fitting (``fit``), and
the graded replications (``experiment``).

Exit codes: 0 on success, 1 on any validation or usage failure, 2 when
``experiment`` runs to completion but a graded check fails.  Output is
deterministic: the same argv and seed produce byte-identical text.  The
environment variable BRACKETLAB_SEED replaces the built-in default seed
of 0; an explicit ``--seed`` beats both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .axioms import (
    AxiomId,
    PreferenceOracle,
    SamplerConfig,
    classify_bracketing,
    check_axiom,
    format_axiom_report,
    format_bracketing_report,
)
from .errors import (
    BracketError,
    DomainViolation,
    OutcomeNotInSupport,
    OutcomeOutOfBounds,
    RangeViolation,
)
from .experiments import EXPERIMENTS, format_experiment_report, run_experiment
from .fileio import (
    model_to_dict,
    read_index,
    read_joint,
    read_marginal,
    read_model,
    read_tree,
)
from .fitting import (
    FAMILY_PARAMS,
    default_grids,
    fit_dataset,
    format_fit_results,
    load_dataset,
)
from .lotteries import make_marginal, product
from .models import ce, compare, evaluate
from .temporal import edu_value, ez_value, kmbib_value, timing_premium

__all__ = ["cli", "main"]

_DU_AXIOM = AxiomId("discounted-utility-no-risk")
_DEFAULT_FIT_FAMILIES = ("eu", "nb", "lambda-mix")


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures folded into the validation exit code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _env_seed() -> int:
    raw = os.environ.get("BRACKETLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"BRACKETLAB_SEED must be an integer, got {raw!r}") from None


def _resolve_seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else _env_seed()


def _wants_consumption_grid(model) -> bool:
    """Probe the money grid's interior; domain errors mean positive outcomes only."""
    sure = lambda x, s: make_marginal([(x, 1.0)], source=s)
    try:
        compare(model, product(sure(-1.0, 1), sure(-1.0, 2)), product(sure(0.0, 1), sure(0.0, 2)))
    except (DomainViolation, RangeViolation, OutcomeOutOfBounds, OutcomeNotInSupport):
        return True
    return False


def _sampler_config(args: argparse.Namespace, model) -> SamplerConfig:
    overrides = {"seed": _resolve_seed(args)}
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "step", None) is not None:
        overrides["step"] = args.step
    grid = args.grid
    if grid == "auto":
        grid = "consumption" if _wants_consumption_grid(model) else "money"
    if grid == "consumption":
        return SamplerConfig.consumption(**overrides)
    return SamplerConfig(**overrides)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    model = read_model(args.model)
    lottery = read_joint(args.lottery)
    print(evaluate(model, lottery))
    return 0


def _cmd_ce(args) -> int:
    index = read_index(args.index)
    lottery = read_marginal(args.marginal)
    print(ce(index, lottery))
    return 0


def _cmd_compare(args) -> int:
    model = read_model(args.model)
    pref = compare(model, read_joint(args.lottery_a), read_joint(args.lottery_b))
    print(pref.relation.name)
    print(f"V(A) = {pref.value_p}")
    print(f"V(B) = {pref.value_q}")
    return 0


def _cmd_axioms(args) -> int:
    model = read_model(args.model)
    oracle = PreferenceOracle.from_model(model)
    cfg = _sampler_config(args, model)
    axiom_ids = [AxiomId(args.axiom)] if args.axiom else list(AxiomId)

    reports = []
    skipped = []
    for axiom in axiom_ids:
        if axiom is _DU_AXIOM:
            u = getattr(model, "u", None)
            beta = getattr(model, "beta", None)
            if u is None or beta is None:
                if args.axiom:
                    raise ValueError(
                        f"{axiom.value} needs a model with sure-path utility "
                        f"and discount factor fields; {model.family!r} has neither"
                    )
                skipped.append(axiom)
                continue
            reports.append(check_axiom(axiom, oracle, cfg, params=(u, beta)))
        else:
            reports.append(check_axiom(axiom, oracle, cfg))

    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True))
    else:
        for report in reports:
            print(format_axiom_report(report))
        for axiom in skipped:
            print(f"{axiom.value}: skipped (no sure-path utility on this family)")
    return 0


def _cmd_classify(args) -> int:
    path = str(args.target)
    if path.endswith(".csv"):
        return _classify_dataset(args)
    model = read_model(path)
    report = classify_bracketing(
        PreferenceOracle.from_model(model), _sampler_config(args, model)
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(format_bracketing_report(report))
    return 0


def _subject_label(result) -> str:
    if result.family in ("eu", "eu-cn"):
        return "broad"
    if result.family == "nb":
        return "narrow"
    lam = result.model.lam
    if lam == 1.0:
        return "broad"
    if lam == 0.0:
        return "narrow"
    return f"partial (lambda={lam:g})"


def _classify_dataset(args) -> int:
    results = fit_dataset(
        load_dataset(args.target), _DEFAULT_FIT_FAMILIES, default_grids()
    )
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "subject": r.subject,
                        "label": _subject_label(r),
                        "family": r.family,
                        "violations": r.violations,
                        "observations": r.observations,
                    }
                    for r in results
                ],
                indent=2,
                sort_keys=True,
            )
        )
    else:
        for r in results:
            print(
                f"{r.subject}: {_subject_label(r)} "
                f"[{r.family}, {r.violations}/{r.observations} violations]"
            )
    return 0


def _cmd_fit(args) -> int:
    families = tuple(args.families) if args.families else _DEFAULT_FIT_FAMILIES
    results = fit_dataset(load_dataset(args.dataset), families, default_grids())
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "subject": r.subject,
                        "family": r.family,
                        "model": model_to_dict(r.model),
                        "violations": r.violations,
                        "observations": r.observations,
                        "skipped": r.skipped,
                        "verdicts": list(r.verdicts),
                    }
                    for r in results
                ],
                indent=2,
                sort_keys=True,
            )
        )
    else:
        print(format_fit_results(results))
    return 0


def _cmd_experiment(args) -> int:
    report = run_experiment(args.name, seed=_resolve_seed(args))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(format_experiment_report(report))
    return 0 if report.passed else 2


def _tree_args(args) -> tuple:
    tree = read_tree(args.tree)
    if args.family in ("ez", "kmbib") and args.alpha is None:
        raise ValueError(f"--alpha is required for the {args.family} recursion")
    return tree


def _cmd_tree_value(args) -> int:
    tree = _tree_args(args)
    if args.family == "ez":
        value = ez_value(tree, args.rho, args.alpha, args.beta)
    elif args.family == "kmbib":
        value = kmbib_value(tree, args.rho, args.alpha, args.beta)
    else:
        value = edu_value(tree, args.rho, args.beta)
    print(value)
    return 0


def _cmd_timing_premium(args) -> int:
    tree = _tree_args(args)
    print(timing_premium(tree, args.rho, args.alpha, args.beta, model=args.family))
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_seed(p: _Parser) -> None:
    p.add_argument("--seed", type=int, default=None, help="sampler seed (default: BRACKETLAB_SEED or 0)")


def _add_grid(p: _Parser) -> None:
    p.add_argument(
        "--grid",
        choices=("auto", "money", "consumption"),
        default="auto",
        help="outcome grid; auto probes the model for a positive-outcome domain",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="bracketlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="value of a model at a joint lottery")
    p.add_argument("model")
    p.add_argument("lottery")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("ce", help="certainty equivalent of a one-source lottery")
    p.add_argument("index")
    p.add_argument("marginal")
    p.set_defaults(func=_cmd_ce)

    p = sub.add_parser("compare", help="banded ranking of two joint lotteries")
    p.add_argument("model")
    p.add_argument("lottery_a")
    p.add_argument("lottery_b")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("axioms", help="sampling-based axiom checks for a model")
    p.add_argument("model")
    p.add_argument("--axiom", choices=[a.value for a in AxiomId], default=None)
    _add_seed(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--step", type=float, default=None, help="outcome grid spacing")
    _add_grid(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_axioms)

    p = sub.add_parser(
        "classify-bracketing",
        help="bracketing regions of a model file, or labels for a choice CSV",
    )
    p.add_argument("target")
    _add_seed(p)
    _add_grid(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify, trials=None)

    p = sub.add_parser("fit", help="zero-one-loss grid fit of a choice CSV")
    p.add_argument("dataset")
    p.add_argument("--families", nargs="+", choices=sorted(FAMILY_PARAMS), default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("experiment", help="run one graded replication")
    p.add_argument("name", choices=EXPERIMENTS)
    _add_seed(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    for name, handler in (
        ("tree-value", _cmd_tree_value),
        ("timing-premium", _cmd_timing_premium),
    ):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} of a consumption tree")
        p.add_argument("tree")
        p.add_argument(
            "--family",
            choices=("ez", "kmbib") if name == "timing-premium" else ("ez", "kmbib", "edu"),
            default="ez" if name == "timing-premium" else None,
            required=name == "tree-value",
        )
        p.add_argument("--rho", type=float, required=True)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--beta", type=float, required=True)
        p.set_defaults(func=handler)

    return parser


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse and run one invocation, returning the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (BracketError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
