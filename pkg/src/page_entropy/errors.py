"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """A geometry or CLI configuration cannot be used."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine failed to converge."""


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree beyond tolerance.

    ``residuals`` maps each checked identity to its observed residual so
    callers (and the CLI) can report them in machine-readable form.
    """

    def __init__(self, message: str, residuals: dict[str, float]):
        super().__init__(message)
        self.residuals = dict(residuals)
