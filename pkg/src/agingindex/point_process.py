"""Failure point processes of repairable systems.

A process is described by its underlying lifetime distribution (time to the
first failure) and a repair effectiveness factor ``q`` in ``[0, 1]`` that
controls how much age survives each repair through a Kijima virtual age:

* type I:  ``v_n = v_{n-1} + q * x_n``
* type II: ``v_n = q * (v_{n-1} + x_n)``

``q = 0`` is a renewal process (as good as new), ``q = 1`` a
non-homogeneous Poisson process (as bad as old) and an underlying shape of 1
gives the homogeneous Poisson process for any ``q``.  Given virtual age
``v``, the next interarrival ``x`` solves ``H(v + x) - H(v) = E`` for a
standard exponential ``E``.

Monte-Carlo estimates are split into fixed blocks of replications, each with
its own Philox stream spawned from the master seed, so results do not depend
on how many worker threads run the blocks.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateCurveError, DomainError
from .gt_index import GtResult, SampledCurve, classify, gt_from_sampled_curve, gt_ratio
from .hazard_models import DistributionSpec, cdf, cumulative_hazard

__all__ = [
    "Model",
    "PointProcessSpec",
    "CifEstimate",
    "next_virtual_age",
    "simulate_history",
    "estimate_cif",
    "power_law_cif",
    "gt_repairable",
    "solve_renewal_equation",
]

BLOCK_SIZE = 4096
BOOTSTRAP_RESAMPLES = 200
_BOOTSTRAP_KEY = 0xB007
_BISECTION_RTOL = 1e-10


class Model(str, enum.Enum):
    HPP = "HPP"
    NHPP = "NHPP"
    RP = "RP"
    GRP = "GRP"


@dataclass(frozen=True)
class PointProcessSpec:
    underlying: DistributionSpec
    repair_effectiveness: float
    kijima: int = 2

    def __post_init__(self) -> None:
        q = float(self.repair_effectiveness)
        if not 0.0 <= q <= 1.0:
            raise DomainError(f"repair effectiveness must lie in [0, 1], got {q}")
        if self.kijima not in (1, 2):
            raise DomainError(f"kijima must be 1 or 2, got {self.kijima}")
        object.__setattr__(self, "repair_effectiveness", q)

    @property
    def model(self) -> Model:
        if self.underlying.shape == 1.0:
            return Model.HPP
        if self.repair_effectiveness == 0.0:
            return Model.RP
        if self.repair_effectiveness == 1.0:
            return Model.NHPP
        return Model.GRP


def next_virtual_age(age, interarrival, q: float, kijima: int = 2):
    """Virtual age right after a repair."""
    if kijima == 1:
        return age + q * interarrival
    return q * (age + interarrival)


def _weibull_interarrivals(dist: DistributionSpec, ages: np.ndarray, e: np.ndarray) -> np.ndarray:
    # x = scale * ((v/scale)**beta + e)**(1/beta) - v, rewritten to avoid
    # cancellation when e is small relative to the accumulated hazard
    beta = dist.shape
    x = np.empty_like(ages)
    fresh = ages == 0.0
    x[fresh] = dist.scale * e[fresh] ** (1.0 / beta)
    old = ~fresh
    v = ages[old]
    a = (v / dist.scale) ** beta
    x[old] = v * np.expm1(np.log1p(e[old] / a) / beta)
    return x


def _bisect_interarrivals(dist: DistributionSpec, ages: np.ndarray, e: np.ndarray) -> np.ndarray:
    target = cumulative_hazard(dist, ages) + e
    lo = np.zeros_like(ages)
    hi = np.full_like(ages, dist.scale)
    short = cumulative_hazard(dist, ages + hi) < target
    while np.any(short):
        hi[short] *= 2.0
        short = cumulative_hazard(dist, ages + hi) < target
    tol = _BISECTION_RTOL * dist.scale
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        below = cumulative_hazard(dist, ages + mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _interarrivals(dist: DistributionSpec, ages: np.ndarray, e: np.ndarray) -> np.ndarray:
    if dist.is_weibull_like:
        return _weibull_interarrivals(dist, ages, e)
    return _bisect_interarrivals(dist, ages, e)


def simulate_history(spec: PointProcessSpec, T: float, rng: np.random.Generator) -> np.ndarray:
    """Event times of one simulated history on ``(0, T]``."""
    if not T > 0:
        raise DomainError(f"horizon must be positive, got {T}")
    q, kijima = spec.repair_effectiveness, spec.kijima
    times = []
    t = 0.0
    age = np.zeros(1)
    while True:
        x = _interarrivals(spec.underlying, age, rng.standard_exponential(1))
        t += float(x[0])
        if t > T:
            return np.asarray(times, dtype=float)
        times.append(t)
        age = next_virtual_age(age, x, q, kijima)


@dataclass(frozen=True)
class CifEstimate:
    """Monte-Carlo estimate of the cumulative intensity ``E[N(t)]`` on a grid.

    ``replicate_areas`` and ``replicate_terminals`` hold, per replication,
    the trapezoid integral of ``N(t)`` over the grid and ``N(T)``.  The GT
    coefficient of the mean curve is a ratio of their means, which is what
    the bootstrap in :func:`gt_repairable` resamples.
    """

    grid: np.ndarray
    mean_counts: np.ndarray
    std_errors: np.ndarray
    replications: int
    seed: int
    replicate_areas: Optional[np.ndarray] = None
    replicate_terminals: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.mean_counts[0] != 0.0 or np.any(np.diff(self.mean_counts) < 0):
            raise DomainError("mean counts must start at 0 and be nondecreasing")
        if self.grid.shape != self.mean_counts.shape or self.grid.shape != self.std_errors.shape:
            raise DomainError("grid, mean_counts and std_errors must have equal shapes")

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def curve(self) -> SampledCurve:
        return SampledCurve(self.grid, self.mean_counts)


def _simulate_block(spec: PointProcessSpec, grid: np.ndarray, n: int, seed_seq: np.random.SeedSequence):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    T = grid[-1]
    G = grid.size
    q, kijima = spec.repair_effectiveness, spec.kijima
    t = np.zeros(n)
    age = np.zeros(n)
    active = np.arange(n)
    cells = []
    while active.size:
        x = _interarrivals(spec.underlying, age[active], rng.standard_exponential(active.size))
        t_new = t[active] + x
        alive = t_new <= T
        active, t_new, x = active[alive], t_new[alive], x[alive]
        t[active] = t_new
        age[active] = next_virtual_age(age[active], x, q, kijima)
        # an event at s counts towards every grid point t_i >= s
        cells.append(active * G + np.searchsorted(grid, t_new, side="left"))
    flat = np.concatenate(cells) if cells else np.empty(0, dtype=np.intp)
    counts = np.cumsum(np.bincount(flat, minlength=n * G).reshape(n, G), axis=1)
    return (
        counts.sum(axis=0),
        (counts * counts).sum(axis=0),
        np.trapezoid(counts, grid, axis=1),
        counts[:, -1].astype(float),
    )


def estimate_cif(
    spec: PointProcessSpec,
    T: float,
    grid_points: int = 200,
    replications: int = 100_000,
    seed: int = 0,
    *,
    workers: int = 1,
) -> CifEstimate:
    """Average simulated counts ``N(t_i)`` over ``replications`` histories.

    The output is bit-identical for any ``workers`` value.
    """
    if not T > 0:
        raise DomainError(f"horizon must be positive, got {T}")
    if grid_points < 3:
        raise DomainError(f"grid_points must be >= 3, got {grid_points}")
    if replications < 100:
        raise DomainError(f"replications must be >= 100, got {replications}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    grid = np.linspace(0.0, T, grid_points)
    sizes = [BLOCK_SIZE] * (replications // BLOCK_SIZE)
    if replications % BLOCK_SIZE:
        sizes.append(replications % BLOCK_SIZE)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, streams))

    def run(job):
        return _simulate_block(spec, grid, *job)

    if workers == 1:
        blocks = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(run, jobs))

    total = sum(b[0] for b in blocks)
    total_sq = sum(b[1] for b in blocks)
    R = replications
    mean = total / R
    # integer sums keep the variance free of accumulation-order effects
    var = np.maximum(R * total_sq - total * total, 0) / (R * (R - 1.0))
    return CifEstimate(
        grid=grid,
        mean_counts=mean,
        std_errors=np.sqrt(var / R),
        replications=R,
        seed=seed,
        replicate_areas=np.concatenate([b[2] for b in blocks]),
        replicate_terminals=np.concatenate([b[3] for b in blocks]),
    )


def power_law_cif(alpha: float, beta: float, t: float) -> float:
    """Cumulative intensity ``(t/alpha)**beta`` of the power-law NHPP."""
    if not alpha > 0 or not beta > 0:
        raise DomainError(f"alpha and beta must be positive, got {alpha}, {beta}")
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got {t}")
    return (t / alpha) ** beta


def gt_repairable(
    cif: CifEstimate,
    *,
    resamples: int = BOOTSTRAP_RESAMPLES,
    class_tol: Optional[float] = None,
) -> GtResult:
    """GT coefficient of an estimated cumulative intensity.

    The standard error is a bootstrap over replications.  Classification uses
    ``2 * std_error`` unless ``class_tol`` is given.
    """
    curve = cif.curve()
    if curve.terminal <= 0.0:
        raise DegenerateCurveError("no events observed on the horizon")
    value = gt_from_sampled_curve(curve).value
    std_error = None
    if cif.replicate_areas is not None and cif.replicate_terminals is not None:
        std_error = _bootstrap_std_error(cif, resamples)
    if class_tol is None:
        class_tol = 2.0 * std_error if std_error is not None else 0.01
    return GtResult(value, cif.horizon, classify(value, class_tol), std_error)


def _bootstrap_std_error(cif: CifEstimate, resamples: int) -> float:
    rng = np.random.default_rng(np.random.SeedSequence(cif.seed, spawn_key=(_BOOTSTRAP_KEY,)))
    areas, terminals = cif.replicate_areas, cif.replicate_terminals
    R = areas.size
    T = cif.horizon
    draws = []
    for _ in range(resamples):
        idx = rng.integers(0, R, R)
        terminal = terminals[idx].mean()
        if terminal > 0:
            draws.append(gt_ratio(areas[idx].mean(), T, terminal))
    return float(np.std(draws, ddof=1))


def _solve_renewal_grid(dist: DistributionSpec, T: float, steps: int):
    grid = np.linspace(0.0, T, steps + 1)
    F = cdf(dist, grid)
    dF = np.diff(F)
    m = np.zeros(steps + 1)
    avg = np.zeros(steps + 1)  # avg[i] = (m[i] + m[i-1]) / 2
    denom = 1.0 - 0.5 * dF[0]
    for i in range(1, steps + 1):
        # Stieltjes trapezoid for int_0^t m(t - x) dF(x); the x = 0 panel
        # contains m[i] itself and is moved to the left-hand side
        acc = F[i] + 0.5 * m[i - 1] * dF[0]
        if i > 1:
            acc += np.dot(avg[i - 1 : 0 : -1], dF[1:i])
        m[i] = acc / denom
        avg[i] = 0.5 * (m[i] + m[i - 1])
    return grid, m


def solve_renewal_equation(
    dist: DistributionSpec,
    T: float,
    steps: int = 2048,
    *,
    tol: Optional[float] = 1e-5,
    max_steps: int = 1 << 15,
) -> SampledCurve:
    """Renewal function ``m(t) = F(t) + int_0^t m(t - x) dF(x)`` on ``[0, T]``.

    The discretized equation is solved on ``steps`` uniform panels.  With a
    ``tol``, the step count is doubled until consecutive terminal values
    differ by less than ``tol`` (or ``max_steps`` is reached) and the finest
    solution is returned.
    """
    if not T > 0:
        raise DomainError(f"horizon must be positive, got {T}")
    if steps < 16:
        raise DomainError(f"steps must be >= 16, got {steps}")
    grid, m = _solve_renewal_grid(dist, T, steps)
    while tol is not None and 2 * steps <= max_steps:
        steps *= 2
        finer_grid, finer = _solve_renewal_grid(dist, T, steps)
        converged = math.fabs(finer[-1] - m[-1]) < tol
        grid, m = finer_grid, finer
        if converged:
            break
    return SampledCurve(grid, m)
