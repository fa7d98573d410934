"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where an operator is defined."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``report`` carries whatever diagnostic object the failing routine had
    (an :class:`~geokern.quadrature.IntegrationReport`, a pair of estimates).
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
