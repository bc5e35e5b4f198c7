"""Regular utility indices: evaluation, inversion, certainty equivalents.

An index is a continuous, strictly monotone scalar function on an interval
domain.  Parametric families invert exactly; tabulated (piecewise-linear)
indices invert exactly per segment, with monotone bisection available as a
fallback for arbitrary monotone callables.

Bivariate indices aggregate an outcome pair (x, y) and are strictly
increasing in each argument.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import DomainViolation, NonpositiveScale, RangeViolation
from .lotteries import INF, MarginalLottery

_BISECT_MAX_ITER = 200
_BISECT_TOL_SCALE = 1e-12


def bisect_inverse(f, target: float, lo: float, hi: float) -> float:
    """Invert a strictly increasing callable by bracketed bisection.

    Absolute tolerance is 1e-12 times the bracket span, capped at 200
    iterations.  Used as the fallback for monotone callables with no
    closed-form inverse.
    """
    flo, fhi = f(lo), f(hi)
    if not flo <= target <= fhi:
        raise RangeViolation(f"target {target} outside [{flo}, {fhi}]")
    tol = _BISECT_TOL_SCALE * (hi - lo)
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Univariate families
# ---------------------------------------------------------------------------


class UtilityIndex:
    """Base class; concrete families implement value/inverse on a domain."""

    domain: tuple[float, float] = (-INF, INF)

    def value(self, x: float) -> float:
        raise NotImplementedError

    def inverse(self, v: float) -> float:
        raise NotImplementedError

    def check_domain(self, x: float) -> float:
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise DomainViolation(f"{x} outside index domain [{lo}, {hi}]")
        return x

    def __call__(self, x: float) -> float:
        return self.value(self.check_domain(x))


@dataclass(frozen=True)
class Power(UtilityIndex):
    """u(x) = x**gamma on the nonnegative reals, gamma > 0."""

    gamma: float
    domain: tuple[float, float] = (0.0, INF)

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise DomainViolation(f"power exponent must be positive, got {self.gamma}")

    def value(self, x: float) -> float:
        return x ** self.gamma

    def inverse(self, v: float) -> float:
        if v < 0.0:
            raise RangeViolation(f"{v} outside the range of x**{self.gamma}")
        return v ** (1.0 / self.gamma)


@dataclass(frozen=True)
class Exponential(UtilityIndex):
    """CARA index u(x) = (1 - exp(-a*x)) / a, a != 0.

    Strictly increasing for either sign of a; a > 0 is the risk-averse
    branch with range bounded above by 1/a.
    """

    a: float

    def __post_init__(self) -> None:
        if self.a == 0.0:
            raise DomainViolation("exponential index needs a != 0 (use Linear instead)")

    def value(self, x: float) -> float:
        return (1.0 - math.exp(-self.a * x)) / self.a

    def inverse(self, v: float) -> float:
        arg = 1.0 - self.a * v
        if arg <= 0.0:
            raise RangeViolation(f"{v} outside the range of the exponential index")
        return -math.log(arg) / self.a


@dataclass(frozen=True)
class Linear(UtilityIndex):
    """u(x) = a*x + b with a > 0."""

    a: float = 1.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise NonpositiveScale(f"linear slope must be positive, got {self.a}")

    def value(self, x: float) -> float:
        return self.a * x + self.b

    def inverse(self, v: float) -> float:
        return (v - self.b) / self.a


@dataclass(frozen=True)
class LossAverseSqrt(UtilityIndex):
    """Square-root value function with loss aversion around the 0 reference.

    v(x) = sqrt(x) for gains, -lam * sqrt(-x) for losses, lam > 0.
    """

    lam: float

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise DomainViolation(f"loss-aversion coefficient must be positive, got {self.lam}")

    def value(self, x: float) -> float:
        if x >= 0.0:
            return math.sqrt(x)
        return -self.lam * math.sqrt(-x)

    def inverse(self, v: float) -> float:
        if v >= 0.0:
            return v * v
        return -((v / self.lam) ** 2)


@dataclass(frozen=True)
class Tabulated(UtilityIndex):
    """Piecewise-linear index through strictly increasing knots.

    The domain is the knot span; inversion solves the containing segment
    exactly.
    """

    knots: tuple[tuple[float, float], ...]
    domain: tuple[float, float] = field(init=False)

    def __post_init__(self) -> None:
        knots = tuple((float(x), float(y)) for x, y in self.knots)
        if len(knots) < 2:
            raise DomainViolation("tabulated index needs at least 2 knots")
        for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
            if not (x1 > x0 and y1 > y0):
                raise DomainViolation("tabulated knots must increase strictly in both coordinates")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "domain", (knots[0][0], knots[-1][0]))

    def value(self, x: float) -> float:
        xs = [k[0] for k in self.knots]
        j = min(max(bisect_right(xs, x) - 1, 0), len(xs) - 2)
        (x0, y0), (x1, y1) = self.knots[j], self.knots[j + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse(self, v: float) -> float:
        ys = [k[1] for k in self.knots]
        if not ys[0] <= v <= ys[-1]:
            raise RangeViolation(f"{v} outside the tabulated range [{ys[0]}, {ys[-1]}]")
        j = min(max(bisect_right(ys, v) - 1, 0), len(ys) - 2)
        (x0, y0), (x1, y1) = self.knots[j], self.knots[j + 1]
        return x0 + (x1 - x0) * (v - y0) / (y1 - y0)


@dataclass(frozen=True)
class Affine(UtilityIndex):
    """Positive affine transform a*f + b of a base index."""

    base: UtilityIndex
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise NonpositiveScale(f"affine scale must be positive, got {self.a}")
        object.__setattr__(self, "domain", self.base.domain)

    def value(self, x: float) -> float:
        return self.a * self.base.value(x) + self.b

    def inverse(self, v: float) -> float:
        return self.base.inverse((v - self.b) / self.a)


def affine(f: UtilityIndex, a: float, b: float) -> UtilityIndex:
    """Positive affine transform of an index; certainty equivalents are unchanged."""
    return Affine(base=f, a=a, b=b)


def apply_index(f: UtilityIndex, v: float, direction: str = "forward") -> float:
    """Evaluate f or its inverse, with domain and range checks."""
    if direction == "forward":
        return f(v)
    if direction == "inverse":
        return f.inverse(v)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def ce(f: UtilityIndex, p: MarginalLottery) -> float:
    """Certainty equivalent of a marginal lottery under index f.

    Computes f^{-1}(sum_x f(x) p(x)).  The result always lies inside the
    support hull; float excursions at the edges are clamped back.

    Raises:
        DomainViolation: a support point falls outside the domain of f.
    """
    mean = sum(prob * f(x) for x, prob in p.entries)
    value = f.inverse(mean)
    lo, hi = min(p.support), max(p.support)
    return min(max(value, lo), hi)


# ---------------------------------------------------------------------------
# Bivariate families
# ---------------------------------------------------------------------------


class BivariateIndex:
    """Aggregator over outcome pairs, strictly increasing in each argument."""

    def value(self, x: float, y: float) -> float:
        raise NotImplementedError

    def __call__(self, x: float, y: float) -> float:
        return self.value(x, y)

    def box(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Per-axis evaluation bounds ((x_lo, x_hi), (y_lo, y_hi))."""
        return ((-INF, INF), (-INF, INF))


@dataclass(frozen=True)
class AdditiveBivariate(BivariateIndex):
    """w(x, y) = u1(x) + beta * u2(y), beta > 0."""

    u1: UtilityIndex
    u2: UtilityIndex
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not self.beta > 0.0:
            raise DomainViolation("additive weight must be positive for strict monotonicity")

    def value(self, x: float, y: float) -> float:
        return self.u1(x) + self.beta * self.u2(y)

    def box(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return (self.u1.domain, self.u2.domain)


@dataclass(frozen=True)
class SumBivariate(BivariateIndex):
    """w(x, y) = u(x + y); broad bracketing of riskless money amounts."""

    u: UtilityIndex

    def value(self, x: float, y: float) -> float:
        return self.u(x + y)


@dataclass(frozen=True)
class CESCRRABivariate(BivariateIndex):
    """w(x, y) = [(1-beta)x^rho + beta*y^rho]^(alpha/rho).

    For alpha < 0 the literal expression decreases in each argument, so the
    value is multiplied by sign(alpha) to keep the index order-faithful,
    mirroring the usual CRRA sign convention.
    """

    rho: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.rho == 0.0 or self.alpha == 0.0:
            raise DomainViolation("CES-CRRA exponents must be nonzero")
        if not (self.rho < 1.0 and self.alpha < 1.0):
            raise DomainViolation("CES-CRRA exponents must be below 1")
        if not 0.0 < self.beta < 1.0:
            raise DomainViolation("CES-CRRA weight must lie in (0, 1)")

    def value(self, x: float, y: float) -> float:
        if x <= 0.0 or y <= 0.0:
            raise DomainViolation("CES-CRRA aggregator needs strictly positive arguments")
        inner = (1.0 - self.beta) * x ** self.rho + self.beta * y ** self.rho
        return math.copysign(inner ** (self.alpha / self.rho), self.alpha)

    def box(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((0.0, INF), (0.0, INF))


@dataclass(frozen=True)
class TabulatedGridBivariate(BivariateIndex):
    """Bilinear interpolation of values on a rectangular grid.

    Exact for any function of the form a + b*x + c*y + d*x*y on each cell,
    which covers multiplicative aggregators on the grid box.  Strict
    monotonicity in each argument is validated by a full grid sweep.
    """

    xs: tuple[float, ...]
    ys: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]  # values[i][j] = w(xs[i], ys[j])

    def __post_init__(self) -> None:
        xs = tuple(float(v) for v in self.xs)
        ys = tuple(float(v) for v in self.ys)
        vals = tuple(tuple(float(v) for v in row) for row in self.values)
        if len(xs) < 2 or len(ys) < 2:
            raise DomainViolation("grid needs at least 2 points per axis")
        if any(b <= a for a, b in zip(xs, xs[1:])) or any(b <= a for a, b in zip(ys, ys[1:])):
            raise DomainViolation("grid axes must increase strictly")
        if len(vals) != len(xs) or any(len(row) != len(ys) for row in vals):
            raise DomainViolation("grid values must be len(xs) x len(ys)")
        for j in range(len(ys)):
            col = [vals[i][j] for i in range(len(xs))]
            if any(b <= a for a, b in zip(col, col[1:])):
                raise DomainViolation("grid values must increase strictly along x")
        for i in range(len(xs)):
            row = vals[i]
            if any(b <= a for a, b in zip(row, row[1:])):
                raise DomainViolation("grid values must increase strictly along y")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, xs, ys) -> "TabulatedGridBivariate":
        """Sample a callable w(x, y) on the given axes."""
        return cls(
            xs=tuple(xs),
            ys=tuple(ys),
            values=tuple(tuple(f(x, y) for y in ys) for x in xs),
        )

    def box(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.xs[0], self.xs[-1]), (self.ys[0], self.ys[-1]))

    def _cell(self, axis: tuple[float, ...], t: float) -> int:
        if not axis[0] <= t <= axis[-1]:
            raise DomainViolation(f"{t} outside the grid box [{axis[0]}, {axis[-1]}]")
        return min(max(bisect_right(axis, t) - 1, 0), len(axis) - 2)

    def value(self, x: float, y: float) -> float:
        i = self._cell(self.xs, x)
        j = self._cell(self.ys, y)
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[j], self.ys[j + 1]
        tx = (x - x0) / (x1 - x0)
        ty = (y - y0) / (y1 - y0)
        v = self.values
        return (
            v[i][j] * (1 - tx) * (1 - ty)
            + v[i + 1][j] * tx * (1 - ty)
            + v[i][j + 1] * (1 - tx) * ty
            + v[i + 1][j + 1] * tx * ty
        )
