"""Error types shared across the package."""

from typing import Optional


class LevyMixError(Exception):
    """Base class for all package errors."""


class DomainError(LevyMixError, ValueError):
    """An argument or parameter lies outside the domain of an operation."""


class SingularityError(DomainError):
    """The requested density value diverges."""


class MomentNotFoundError(DomainError):
    """The requested moment does not exist for this law."""


class ConfigError(DomainError):
    """Invalid command line or config file input."""


class NumericFailure(LevyMixError, ArithmeticError):
    """A numerical method failed to converge or overflowed.

    Args:
        message: What failed.
        worst_estimate: The last (or worst) estimate available when giving up.
    """

    def __init__(self, message: str, worst_estimate: Optional[float | complex] = None):
        super().__init__(message)
        self.worst_estimate = worst_estimate

    def __str__(self) -> str:
        base = super().__str__()
        if self.worst_estimate is None:
            return base
        return f"{base} (worst estimate: {self.worst_estimate!r})"


class VerificationFailure(LevyMixError):
    """At least one verification check failed."""
