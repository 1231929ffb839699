"""The GT (Gini-type) aging coefficient.

For a nondecreasing curve ``H`` on ``[0, T]`` (a cumulative hazard or a
cumulative intensity) the coefficient is::

    C(T) = 1 - 2 * integral_0^T H(t) dt / (T * H(T))

i.e. one minus the ratio of the area under ``H`` to the area under the chord
from the origin to ``(T, H(T))``.  It is 0 for a straight line (exponential
lifetimes, homogeneous Poisson process), positive for a convex curve
(aging) and negative for a concave one (rejuvenation).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateCurveError, DegenerateHorizonError, DomainError, NonConvergenceError
from .hazard_models import DistributionSpec, cumulative_hazard

__all__ = [
    "Classification",
    "GtResult",
    "SampledCurve",
    "classify",
    "gt_from_sampled_curve",
    "gt_nonrepairable",
    "gt_ratio",
    "gt_weibull_closed_form",
    "integrate_adaptive",
]

DEFAULT_CLASS_TOL = 0.01
DEFAULT_QUAD_TOL = 1e-9


class Classification(str, enum.Enum):
    AGING = "aging"
    REJUVENATING = "rejuvenating"
    CONSTANT = "constant"


def classify(c: float, tol: float = DEFAULT_CLASS_TOL) -> Classification:
    if tol < 0:
        raise DomainError(f"classification tolerance must be >= 0, got {tol}")
    if abs(c) <= tol:
        return Classification.CONSTANT
    return Classification.AGING if c > 0 else Classification.REJUVENATING


@dataclass(frozen=True)
class GtResult:
    """A GT coefficient evaluated over ``[0, horizon]``.

    ``std_error`` is set only for Monte-Carlo estimates.
    """

    value: float
    horizon: float
    classification: Classification
    std_error: Optional[float] = None

    def to_dict(self) -> dict:
        out = {
            "c": self.value,
            "horizon": self.horizon,
            "classification": self.classification.value,
        }
        if self.std_error is not None:
            out["std_error"] = self.std_error
        return out


@dataclass(frozen=True)
class SampledCurve:
    """A nondecreasing curve sampled on a grid from 0 to T, starting at 0."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise DomainError("grid and values must be 1-d arrays of equal length")
        if grid.size < 3:
            raise DomainError("a sampled curve needs at least 3 points")
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise DomainError("grid must start at 0 and be strictly increasing")
        if values[0] != 0.0:
            raise DomainError("curve must start at 0")
        if np.any(np.diff(values) < 0):
            raise DomainError("curve values must be nondecreasing")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    @property
    def terminal(self) -> float:
        return float(self.values[-1])


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    max_depth: int = 50,
) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    Raises NonConvergenceError (with the best estimate attached) when some
    panel still misses its share of ``abs_tol`` at ``max_depth``.
    """
    if not a < b:
        raise DomainError(f"integration bounds must satisfy a < b, got [{a}, {b}]")
    if not abs_tol > 0:
        raise DomainError(f"abs_tol must be positive, got {abs_tol}")

    exhausted = False

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        nonlocal exhausted
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            exhausted = True
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + recurse(
            m, b, fm, frm, fb, right, 0.5 * tol, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    estimate = recurse(a, b, fa, fm, fb, whole, abs_tol, 0)
    if exhausted:
        raise NonConvergenceError(
            f"adaptive Simpson hit depth {max_depth} before reaching tolerance {abs_tol}",
            estimate,
        )
    return estimate


def gt_weibull_closed_form(beta: float) -> float:
    """GT coefficient of a Weibull law (and of the power-law NHPP).

    Independent of the scale and of the horizon.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    return 1.0 - 2.0 / (beta + 1.0)


def gt_ratio(integral: float, horizon: float, terminal: float) -> float:
    """``1 - 2 * integral / (horizon * terminal)``."""
    return 1.0 - 2.0 * integral / (horizon * terminal)


def _cumulative_hazard_integral(dist: DistributionSpec, T: float, abs_tol: float) -> float:
    if dist.shape >= 1.0:
        return integrate_adaptive(lambda t: cumulative_hazard(dist, t), 0.0, T, abs_tol)
    # H(t) ~ t**shape near 0 has an unbounded derivative; t = T * s**p with
    # p = 1/shape makes the integrand behave like s**(1/shape) instead.
    p = 1.0 / dist.shape

    def integrand(s: float) -> float:
        if s == 0.0:
            return 0.0
        return cumulative_hazard(dist, T * s**p) * p * T * s ** (p - 1.0)

    return integrate_adaptive(integrand, 0.0, 1.0, abs_tol)


def gt_nonrepairable(
    dist: DistributionSpec,
    T: float,
    quad_tol: float = DEFAULT_QUAD_TOL,
    *,
    class_tol: float = DEFAULT_CLASS_TOL,
    closed_form: bool = True,
) -> GtResult:
    """GT coefficient of a lifetime distribution over ``[0, T]``.

    The Weibull and exponential families use the closed form unless
    ``closed_form=False``; the gamma family is integrated by adaptive
    Simpson to absolute tolerance ``quad_tol * T * H(T)``.
    """
    if not T > 0:
        raise DomainError(f"horizon must be positive, got {T}")
    H_T = cumulative_hazard(dist, T)
    if H_T == 0.0:
        raise DegenerateHorizonError(f"F(T) is numerically 0 at T={T}")
    if closed_form and dist.is_weibull_like:
        value = gt_weibull_closed_form(dist.shape)
    else:
        integral = _cumulative_hazard_integral(dist, T, quad_tol * T * H_T)
        value = gt_ratio(integral, T, H_T)
    return GtResult(value, float(T), classify(value, class_tol))


def gt_from_sampled_curve(curve: SampledCurve, class_tol: float = DEFAULT_CLASS_TOL) -> GtResult:
    """GT coefficient of a sampled curve, integrated by the trapezoid rule.

    Exact for piecewise-linear curves with knots on the grid.
    """
    if curve.terminal <= 0.0:
        raise DegenerateCurveError("curve has zero terminal value")
    integral = float(np.trapezoid(curve.values, curve.grid))
    value = gt_ratio(integral, curve.horizon, curve.terminal)
    return GtResult(value, curve.horizon, classify(value, class_tol))
