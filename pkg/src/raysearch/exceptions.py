"""Exception types raised across the package."""


class RaySearchError(Exception):
    """Base class for all package errors."""


class DomainError(RaySearchError, ValueError):
    """A parameter lies outside the admissible domain of an operation."""


class RangeError(RaySearchError, IndexError):
    """An index is outside the available range (tabulated values, trace steps)."""


class NotHitError(RaySearchError):
    """A competitive ratio was requested for a walk that never reached its goal."""


class MonotonicityError(RaySearchError):
    """An m-ray strategy is not monotone under the active error model."""


class NoProgressError(RaySearchError):
    """The guaranteed worst-case distance from the start is not positive."""


class BudgetError(RaySearchError):
    """An exhaustive enumeration exceeds its configured node limit."""


class ConvergenceError(RaySearchError):
    """A numerical search could not bracket or converge to its target."""
