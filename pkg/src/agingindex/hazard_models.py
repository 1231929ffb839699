"""Parametric lifetime models and the special functions behind them.

Three families are supported: exponential, Weibull and gamma.  Every
public function accepts either a scalar time or a numpy array of times and
returns a value of the same shape (a plain ``float`` for scalars).

The cumulative hazard is never obtained as ``-log(1 - F)``.  For the Weibull
family it is evaluated as ``(t/scale)**shape`` directly, and for the gamma
family as minus the logarithm of the regularized upper incomplete gamma
function, which is itself computed in log space.  This keeps full relative
precision when the survival is close to 0 or to 1.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    DegenerateHorizonError,
    DomainError,
    NonConvergenceError,
    OverflowHorizonError,
    SingularityError,
)

__all__ = [
    "Family",
    "DistributionSpec",
    "cdf",
    "survival",
    "hazard",
    "cumulative_hazard",
    "effective_failure_rate",
    "reg_inc_gamma_lower",
    "reg_inc_gamma_upper",
    "log_reg_inc_gamma_upper",
]

ArrayLike = Union[float, np.ndarray]

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


class Family(str, enum.Enum):
    EXPONENTIAL = "exponential"
    WEIBULL = "weibull"
    GAMMA = "gamma"


@dataclass(frozen=True)
class DistributionSpec:
    """A lifetime distribution.

    ``scale`` is the Weibull scale, the reciprocal gamma rate, or the
    reciprocal exponential rate.  ``shape`` is the Weibull shape or the gamma
    shape and is fixed at 1 for the exponential family.
    """

    family: Family
    scale: float
    shape: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "shape", float(self.shape))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be positive and finite, got {self.scale}")
        if not (self.shape > 0 and math.isfinite(self.shape)):
            raise DomainError(f"shape must be positive and finite, got {self.shape}")
        if self.family is Family.EXPONENTIAL and self.shape != 1.0:
            raise DomainError("exponential family has shape fixed at 1")

    @classmethod
    def exponential(cls, rate: float) -> DistributionSpec:
        if not rate > 0:
            raise DomainError(f"rate must be positive, got {rate}")
        return cls(Family.EXPONENTIAL, 1.0 / rate, 1.0)

    @classmethod
    def weibull(cls, scale: float, shape: float) -> DistributionSpec:
        return cls(Family.WEIBULL, scale, shape)

    @classmethod
    def gamma(cls, shape: float, rate: float = 1.0) -> DistributionSpec:
        if not rate > 0:
            raise DomainError(f"rate must be positive, got {rate}")
        return cls(Family.GAMMA, 1.0 / rate, shape)

    @property
    def rate(self) -> float:
        return 1.0 / self.scale

    @property
    def is_weibull_like(self) -> bool:
        """True when the cumulative hazard is the power law ``(t/scale)**shape``."""
        return self.family is not Family.GAMMA


# ---------------------------------------------------------------------------
# regularized incomplete gamma


def _log_prefactor(k: float, x: float) -> float:
    return -x + k * math.log(x) - math.lgamma(k)


def _gamma_series(k: float, x: float) -> float:
    # P(k, x) for x < k + 1
    ap = k
    term = 1.0 / k
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return math.exp(_log_prefactor(k, x) + math.log(total))
    raise NonConvergenceError(
        f"incomplete gamma series did not converge for k={k}, x={x}",
        math.exp(_log_prefactor(k, x) + math.log(total)),
    )


def _gamma_log_cf(k: float, x: float) -> float:
    # log Q(k, x) for x >= k + 1, modified Lentz evaluation
    b = x + 1.0 - k
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - k)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return _log_prefactor(k, x) + math.log(h)
    raise NonConvergenceError(
        f"incomplete gamma continued fraction did not converge for k={k}, x={x}",
        math.exp(_log_prefactor(k, x) + math.log(h)),
    )


def _check_gamma_args(k: float, x: float) -> None:
    if not k > 0:
        raise DomainError(f"incomplete gamma requires k > 0, got {k}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x}")


def _elementwise(fn: Callable[..., float]) -> Callable[..., ArrayLike]:
    """Lift a scalar function of a trailing argument to numpy arrays."""

    @functools.wraps(fn)
    def wrapper(*args):
        *head, x = args
        if np.ndim(x) == 0:
            return fn(*head, float(x))
        return np.vectorize(lambda v: fn(*head, v), otypes=[float])(x)

    return wrapper


@_elementwise
def reg_inc_gamma_lower(k: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(k, x)``."""
    _check_gamma_args(k, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < k + 1.0:
        return _gamma_series(k, x)
    return -math.expm1(_gamma_log_cf(k, x))


@_elementwise
def log_reg_inc_gamma_upper(k: float, x: float) -> float:
    """``log Q(k, x)`` without underflow for large ``x``."""
    _check_gamma_args(k, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < k + 1.0:
        return math.log1p(-_gamma_series(k, x))
    return _gamma_log_cf(k, x)


@_elementwise
def reg_inc_gamma_upper(k: float, x: float) -> float:
    """Regularized upper incomplete gamma ``Q(k, x) = 1 - P(k, x)``.

    Uses the continued fraction directly for ``x >= k + 1`` so small tail
    values are not lost to subtraction.
    """
    _check_gamma_args(k, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < k + 1.0:
        return 1.0 - _gamma_series(k, x)
    return math.exp(_gamma_log_cf(k, x))


# ---------------------------------------------------------------------------
# distribution functions


def _check_time(t: float) -> None:
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got {t}")


def _power_law(dist: DistributionSpec, t: float) -> float:
    try:
        return (t / dist.scale) ** dist.shape
    except OverflowError:
        return math.inf


@_elementwise
def cumulative_hazard(dist: DistributionSpec, t: float) -> float:
    """Cumulative hazard ``H(t) = -ln R(t)``."""
    _check_time(t)
    if t == 0.0:
        return 0.0
    if dist.is_weibull_like:
        value = _power_law(dist, t)
    else:
        value = -log_reg_inc_gamma_upper(dist.shape, t / dist.scale)
    if not math.isfinite(value):
        raise OverflowHorizonError(f"horizon beyond representable survival at t={t}")
    return value


@_elementwise
def survival(dist: DistributionSpec, t: float) -> float:
    """Reliability function ``R(t)``."""
    _check_time(t)
    if dist.is_weibull_like:
        return math.exp(-_power_law(dist, t))
    return reg_inc_gamma_upper(dist.shape, t / dist.scale)


@_elementwise
def cdf(dist: DistributionSpec, t: float) -> float:
    _check_time(t)
    if dist.is_weibull_like:
        return -math.expm1(-_power_law(dist, t))
    return reg_inc_gamma_lower(dist.shape, t / dist.scale)


@_elementwise
def hazard(dist: DistributionSpec, t: float) -> float:
    """Failure rate ``h(t) = f(t) / R(t)``.

    Raises SingularityError at ``t = 0`` when the shape is below 1.
    """
    _check_time(t)
    k = dist.shape
    if t == 0.0:
        if k < 1.0:
            raise SingularityError("hazard diverges at t=0 for shape < 1")
        return 1.0 / dist.scale if k == 1.0 else 0.0
    x = t / dist.scale
    if dist.is_weibull_like:
        return k / dist.scale * x ** (k - 1.0)
    log_h = (k - 1.0) * math.log(x) - x - math.lgamma(k) - log_reg_inc_gamma_upper(k, x)
    return math.exp(log_h) / dist.scale


def effective_failure_rate(dist: DistributionSpec, T: float) -> float:
    """Rate of the exponential law sharing the cumulative hazard at ``T``."""
    if not T > 0:
        raise DomainError(f"horizon must be positive, got {T}")
    H = cumulative_hazard(dist, T)
    if H == 0.0:
        raise DegenerateHorizonError(f"F(T) is numerically 0 at T={T}")
    return H / T
