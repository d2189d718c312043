"""Exception types shared across the package."""

from __future__ import annotations


class BlowupLabError(Exception):
    """Base class for all package errors."""


class DomainError(BlowupLabError, ValueError):
    """A parameter is outside its documented domain."""


class MalformedInputError(BlowupLabError, ValueError):
    """Structurally invalid input data (bad endpoint, self-loop, ...)."""


class PreconditionError(BlowupLabError, ValueError):
    """A documented operation precondition does not hold."""


class ResourceBudgetError(BlowupLabError, RuntimeError):
    """An operation would exceed its configured budget.

    `cost` carries the offending estimate, `suggestion` a human-readable
    alternative (e.g. switch to the sampler).
    """

    def __init__(self, message: str, cost: int | None = None, suggestion: str | None = None):
        super().__init__(message)
        self.cost = cost
        self.suggestion = suggestion


class GraphFormatError(BlowupLabError, ValueError):
    """Parse error in a graph or set file; reports the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
