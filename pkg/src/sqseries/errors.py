"""Exception hierarchy and warning codes shared by all modules."""

from __future__ import annotations

__all__ = [
    "SquareSeriesError",
    "InvalidConfig",
    "DomainError",
    "RegionViolation",
    "NoConvergence",
    "NonFiniteIntegrand",
    "UnsupportedOrder",
    "LengthMismatch",
    "UnsupportedDerivative",
    "DegenerateAlpha",
    "NEAR_POLE",
    "REGION_OVERRIDE",
    "NO_CONVERGENCE",
    "DIVERGENT",
]

# warning codes attached to EvalResult.warnings
NEAR_POLE = "NEAR_POLE"
REGION_OVERRIDE = "REGION_OVERRIDE"
NO_CONVERGENCE = "NO_CONVERGENCE"
DIVERGENT = "DIVERGENT"


class SquareSeriesError(Exception):
    """Base class for all package errors."""


class InvalidConfig(SquareSeriesError, ValueError):
    """A quadrature configuration field is out of range."""


class DomainError(SquareSeriesError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class RegionViolation(DomainError):
    """Parameters fall outside the stated region of validity of a representation."""


class NoConvergence(SquareSeriesError, ArithmeticError):
    """The refinement budget was exhausted before the tolerance was met."""

    def __init__(self, message: str, value: complex | None = None, error_estimate: float | None = None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class NonFiniteIntegrand(SquareSeriesError, ArithmeticError):
    """The integrand produced NaN or infinity at some node."""


class UnsupportedOrder(SquareSeriesError, ValueError):
    """A requested order (degree, derivative, power) is beyond the supported range."""


class LengthMismatch(SquareSeriesError, ValueError):
    """Two sequences that must have equal length do not."""


class UnsupportedDerivative(SquareSeriesError, NotImplementedError):
    """No derivative provider is available for this sequence."""


class DegenerateAlpha(SquareSeriesError, ValueError):
    """The compact Fourier form is singular because exp(2i*alpha) == 1."""
