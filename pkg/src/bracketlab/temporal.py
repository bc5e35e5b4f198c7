"""Consumption trees, recursive values, and the timing premium.

A tree node carries the consumption paid at its period; branching at a
period-t node resolves at t+1.  Two recursive values live here:

* the Epstein-Zin recursion, which is sensitive to when uncertainty
  resolves, and
* a branch-wise certainty-equivalent recursion that conditions on the
  consumption history only, so any two trees inducing the same path
  lottery get the same value.

Both use CRRA per-period utility (exponent rho for time, alpha for risk)
and are homogeneous of degree one in consumption, which is what makes the
timing premium a pure number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateParameters, DomainViolation, ProbabilitySumOutOfTolerance
from .lotteries import PROB_TOL, canonical

Path = tuple[float, ...]
PathLottery = tuple[tuple[Path, float], ...]


@dataclass(frozen=True)
class TemporalTree:
    """Single-root consumption tree.

    children holds (probability, subtree) pairs; probabilities must sum to
    one within the usual lottery tolerance and are renormalized.  A node
    with no children is terminal.
    """

    c: float
    children: tuple[tuple[float, "TemporalTree"], ...] = ()

    def __post_init__(self) -> None:
        if not self.children:
            return
        kids = tuple((float(p), node) for p, node in self.children)
        total = 0.0
        for p, _ in kids:
            if p < 0.0:
                raise ProbabilitySumOutOfTolerance(f"negative branch probability {p}")
            total += p
        if abs(total - 1.0) > PROB_TOL:
            raise ProbabilitySumOutOfTolerance(
                f"branch probabilities sum to {total}, expected 1"
            )
        kids = tuple((p / total, node) for p, node in kids if p > 0.0)
        if not kids:
            raise DegenerateParameters("node has children but no probability mass")
        object.__setattr__(self, "children", kids)

    @property
    def is_terminal(self) -> bool:
        return not self.children


def chain(consumptions: Path) -> TemporalTree:
    """Deterministic tree paying the given consumptions in order."""
    if not consumptions:
        raise DegenerateParameters("a chain needs at least one period")
    node = TemporalTree(consumptions[-1])
    for c in reversed(consumptions[:-1]):
        node = TemporalTree(c, ((1.0, node),))
    return node


def horizon(tree: TemporalTree) -> int:
    """Length of the longest consumption path, in periods."""
    if tree.is_terminal:
        return 1
    return 1 + max(horizon(node) for _, node in tree.children)


def build_iid_tree(
    c0: float, states: list[tuple[float, float]], steps: int
) -> TemporalTree:
    """Tree where consumption grows by an i.i.d. multiplicative factor.

    states holds (growth factor, probability) pairs; steps is the number of
    growth transitions, so the tree spans steps + 1 periods.
    """
    if steps < 0:
        raise DegenerateParameters(f"steps must be nonnegative, got {steps}")
    if not states:
        raise DegenerateParameters("need at least one growth state")
    for g, _ in states:
        if not g > 0.0:
            raise DomainViolation(f"growth factors must be positive, got {g}")

    def grow(c: float, remaining: int) -> TemporalTree:
        if remaining == 0:
            return TemporalTree(c)
        return TemporalTree(
            c, tuple((p, grow(c * g, remaining - 1)) for g, p in states)
        )

    return grow(c0, steps)


def induced_path_lottery(tree: TemporalTree) -> PathLottery:
    """Distribution over consumption paths, pooled at twelve significant
    digits per coordinate."""
    def walk(node: TemporalTree) -> list[tuple[Path, float]]:
        if node.is_terminal:
            return [((canonical(node.c),), 1.0)]
        out = []
        for p, child in node.children:
            for path, q in walk(child):
                out.append(((canonical(node.c),) + path, p * q))
        return out

    pooled: dict[Path, float] = {}
    for path, p in walk(tree):
        pooled[path] = pooled.get(path, 0.0) + p
    return tuple(sorted(pooled.items()))


def collapse_early(tree: TemporalTree) -> TemporalTree:
    """Same path lottery, all uncertainty resolved right after the root.

    The root consumption is unchanged; each distinct continuation becomes a
    deterministic chain carrying its path probability.
    """
    if tree.is_terminal:
        return tree
    branches = []
    for path, p in induced_path_lottery(tree):
        branches.append((p, chain(path[1:])))
    return TemporalTree(tree.c, tuple(branches))


# ---------------------------------------------------------------------------
# Recursive values
# ---------------------------------------------------------------------------


def _check_params(rho: float, alpha: float, beta: float) -> None:
    if rho == 0.0 or not rho < 1.0:
        raise DomainViolation(f"rho must be nonzero and below 1, got {rho}")
    if alpha == 0.0 or not alpha < 1.0:
        raise DomainViolation(f"alpha must be nonzero and below 1, got {alpha}")
    if not 0.0 <= beta < 1.0:
        raise DomainViolation(f"beta must lie in [0, 1), got {beta}")


def _check_consumption(c: float) -> float:
    if not c > 0.0:
        raise DomainViolation(f"consumption must be strictly positive, got {c}")
    return c


def ez_value(tree: TemporalTree, rho: float, alpha: float, beta: float) -> float:
    """Epstein-Zin value: U = [(1-beta) c^rho + beta m^rho]^(1/rho) with m
    the alpha-power certainty equivalent of the children's values.

    Terminal nodes are worth ((1-beta) c^rho)^(1/rho).  Resolution timing
    matters whenever rho differs from alpha.
    """
    _check_params(rho, alpha, beta)

    def rec(node: TemporalTree) -> float:
        c = _check_consumption(node.c)
        if node.is_terminal:
            return ((1.0 - beta) * c**rho) ** (1.0 / rho)
        m = sum(p * rec(child) ** alpha for p, child in node.children) ** (1.0 / alpha)
        return ((1.0 - beta) * c**rho + beta * m**rho) ** (1.0 / rho)

    return rec(tree)


def kmbib_value(tree: TemporalTree, rho: float, alpha: float, beta: float) -> float:
    """History-based branch-wise value on the induced path lottery.

    At each consumption history the continuation is the alpha-power
    certainty equivalent over next-period consumption, conditioning on the
    history alone.  Trees with the same path lottery are worth the same, so
    resolution timing is irrelevant by construction.  Requires a uniform
    horizon, since histories of unequal length cannot be pooled.
    """
    _check_params(rho, alpha, beta)
    atoms = induced_path_lottery(tree)
    lengths = {len(path) for path, _ in atoms}
    if len(lengths) != 1:
        raise DegenerateParameters("history-based value needs a uniform horizon")

    def rec(c_now: float, continuations: list[tuple[Path, float]]) -> float:
        _check_consumption(c_now)
        if not continuations or not continuations[0][0]:
            return ((1.0 - beta) * c_now**rho) ** (1.0 / rho)
        groups: dict[float, list[tuple[Path, float]]] = {}
        for path, p in continuations:
            groups.setdefault(path[0], []).append((path[1:], p))
        moment = 0.0
        for c_next, sub in groups.items():
            mass = sum(p for _, p in sub)
            u_next = rec(c_next, [(rest, p / mass) for rest, p in sub])
            moment += mass * u_next**alpha
        m = moment ** (1.0 / alpha)
        return ((1.0 - beta) * c_now**rho + beta * m**rho) ** (1.0 / rho)

    root_c = atoms[0][0][0]
    return rec(root_c, [(path[1:], p) for path, p in atoms])


def edu_value(tree: TemporalTree, rho: float, beta: float) -> float:
    """Discounted-power value [(1-beta) E sum_t beta^(t-1) c_t^rho]^(1/rho).

    Linear in path probabilities; coincides with the Epstein-Zin value
    exactly when alpha equals rho.
    """
    _check_params(rho, rho if rho != 0.0 else -1.0, beta)
    total = 0.0
    for path, p in induced_path_lottery(tree):
        total += p * sum(
            beta**t * _check_consumption(c) ** rho for t, c in enumerate(path)
        )
    return ((1.0 - beta) * total) ** (1.0 / rho)


def timing_premium(
    tree: TemporalTree, rho: float, alpha: float, beta: float, model: str = "ez"
) -> float:
    """Fraction of the gradual-resolution value the agent would give up for
    early resolution: 1 - U_late / U_early.

    Positive when early resolution is preferred (for the Epstein-Zin value
    this happens when rho exceeds alpha), zero for the history-based value.
    """
    if model == "ez":
        value = ez_value
    elif model == "kmbib":
        value = kmbib_value
    else:
        raise ValueError(f"model must be 'ez' or 'kmbib', got {model!r}")
    late = value(tree, rho, alpha, beta)
    early = value(collapse_early(tree), rho, alpha, beta)
    return 1.0 - late / early
