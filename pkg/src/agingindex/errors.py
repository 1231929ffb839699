"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class AgingIndexError(Exception):
    """Base class for all errors raised by agingindex."""


class DomainError(AgingIndexError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DomainError):
    """The requested quantity diverges at the given point."""


class OverflowHorizonError(AgingIndexError, ArithmeticError):
    """Horizon beyond representable survival."""


class DegenerateHorizonError(DomainError):
    """F(T) is numerically 0 or 1, so the GT ratio is undefined."""


class DegenerateCurveError(DomainError):
    """A sampled or step curve has zero terminal value."""


class MalformedInputError(DomainError):
    """Input records violate the data-model invariants."""


class NonConvergenceError(AgingIndexError, ArithmeticError):
    """An iterative routine exhausted its budget.

    The best available estimate is kept on ``best_estimate``.
    """

    def __init__(self, message: str, best_estimate: float) -> None:
        super().__init__(message)
        self.best_estimate = best_estimate
