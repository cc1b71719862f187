"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(ArithmeticError):
    """An iterative routine failed to reach its tolerance.

    The best available estimate and its error bound are kept so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 error_bound: float = float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
