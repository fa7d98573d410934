"""Gegenbauer-Chebyshev fractional integrals and kernels of Radon-type transforms."""

from geokern.errors import ConvergenceError, DomainError

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "DomainError", "__version__"]
