"""GT coefficients from recorded failure data.

Non-repairable units are summarized by the Nelson-Aalen cumulative hazard,
repairable fleets by the mean cumulative function (MCF).  Both estimators
are right-continuous step functions, so the GT integral is a finite sum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateCurveError, DomainError, MalformedInputError
from .gt_index import DEFAULT_CLASS_TOL, GtResult, SampledCurve, classify, gt_ratio

__all__ = [
    "LifetimeSample",
    "EventHistory",
    "StepCurve",
    "nelson_aalen",
    "mcf",
    "gt_from_step_curve",
]


@dataclass(frozen=True)
class LifetimeSample:
    """Failure or censoring times of independent units observed up to ``horizon``."""

    records: tuple[tuple[float, bool], ...]
    horizon: float

    def __post_init__(self) -> None:
        records = tuple((float(t), bool(c)) for t, c in self.records)
        object.__setattr__(self, "records", records)
        if not self.horizon > 0:
            raise MalformedInputError(f"horizon must be positive, got {self.horizon}")
        if any(not t > 0 for t, _ in records):
            raise MalformedInputError("all lifetimes must be positive")
        if not any(not c and t <= self.horizon for t, c in records):
            raise MalformedInputError("need at least one uncensored failure on the horizon")

    @classmethod
    def from_arrays(cls, times: Sequence[float], censored: Sequence[bool] | None = None, *, horizon: float):
        if censored is None:
            censored = [False] * len(times)
        if len(censored) != len(times):
            raise MalformedInputError("times and censored flags differ in length")
        return cls(tuple(zip(times, censored)), horizon)


@dataclass(frozen=True)
class EventHistory:
    system_id: str
    event_times: tuple[float, ...]
    window_end: float

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.event_times)
        object.__setattr__(self, "event_times", times)
        if any(not t > 0 for t in times):
            raise MalformedInputError(f"system {self.system_id}: event times must be positive")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise MalformedInputError(f"system {self.system_id}: event times must be strictly increasing")
        if times and times[-1] > self.window_end:
            raise MalformedInputError(f"system {self.system_id}: event after the observation window")


@dataclass(frozen=True)
class StepCurve:
    """Right-continuous step function, 0 before the first jump, held to ``horizon``."""

    jump_times: np.ndarray
    cumulative_values: np.ndarray
    horizon: float

    def __post_init__(self) -> None:
        jumps = np.asarray(self.jump_times, dtype=float)
        values = np.asarray(self.cumulative_values, dtype=float)
        if jumps.ndim != 1 or jumps.shape != values.shape:
            raise DomainError("jump times and values must be 1-d arrays of equal length")
        if jumps.size:
            if jumps[0] <= 0 or jumps[-1] > self.horizon or np.any(np.diff(jumps) <= 0):
                raise DomainError("jump times must be strictly increasing within (0, horizon]")
            if values[0] <= 0 or np.any(np.diff(values) <= 0):
                raise DomainError("step values must be positive and strictly increasing")
        object.__setattr__(self, "jump_times", jumps)
        object.__setattr__(self, "cumulative_values", values)

    def to_sampled_curve(self) -> SampledCurve:
        """Piecewise-linear stand-in whose trapezoid integral matches the step integral.

        Each jump is encoded by a knot one ulp to its left carrying the
        previous level, so the discrepancy is of order one ulp per jump.
        """
        grid = [0.0]
        values = [0.0]
        level = 0.0
        for t, v in zip(self.jump_times, self.cumulative_values):
            left = float(np.nextafter(t, 0.0))
            if left > grid[-1]:
                grid.append(left)
                values.append(level)
            grid.append(float(t))
            values.append(float(v))
            level = float(v)
        if grid[-1] < self.horizon:
            grid.append(float(self.horizon))
            values.append(level)
        if len(grid) < 3:
            grid.insert(1, 0.5 * grid[1])
            values.insert(1, 0.0)
        return SampledCurve(np.array(grid), np.array(values))


def nelson_aalen(sample: LifetimeSample) -> StepCurve:
    """Nelson-Aalen cumulative hazard truncated at the sample horizon.

    Tied failures form one jump ``d_i / n_i``; a unit censored at a failure
    time still counts as at risk there.
    """
    times = np.array([t for t, _ in sample.records])
    deaths = Counter(t for t, c in sample.records if not c and t <= sample.horizon)
    jump_times = sorted(deaths)
    values = []
    total = 0.0
    for t in jump_times:
        at_risk = int(np.count_nonzero(times >= t))
        if at_risk == 0:
            raise MalformedInputError(f"empty risk set at t={t}")
        total += deaths[t] / at_risk
        values.append(total)
    return StepCurve(np.array(jump_times), np.array(values), sample.horizon)


def mcf(histories: Iterable[EventHistory], T: float) -> StepCurve:
    """Fleet mean cumulative function: events up to ``t`` per system."""
    histories = list(histories)
    if not histories:
        raise MalformedInputError("mcf needs at least one history")
    for h in histories:
        if h.window_end != T:
            raise MalformedInputError(
                f"system {h.system_id}: observation window {h.window_end} differs from horizon {T}"
            )
    counts = Counter(t for h in histories for t in h.event_times)
    jump_times = sorted(counts)
    cumulative = np.cumsum([counts[t] for t in jump_times]) / len(histories)
    return StepCurve(np.array(jump_times), cumulative, T)


def gt_from_step_curve(curve: StepCurve, class_tol: float = DEFAULT_CLASS_TOL) -> GtResult:
    """GT coefficient of a step curve, with the area summed exactly."""
    if curve.jump_times.size == 0 or curve.cumulative_values[-1] <= 0:
        raise DegenerateCurveError("step curve has no jumps")
    T = curve.horizon
    widths = np.diff(np.append(curve.jump_times, T))
    integral = float(np.dot(curve.cumulative_values, widths))
    value = gt_ratio(integral, T, float(curve.cumulative_values[-1]))
    return GtResult(value, float(T), classify(value, class_tol))
