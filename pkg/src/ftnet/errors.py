"""Exception types shared across the package."""

from __future__ import annotations


class FtnetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FtnetError):
    """Malformed instance file, solution file, or decomposition expression."""


class ValidationError(FtnetError):
    """Structurally invalid instance or operation argument."""


class CyclicGraphError(ValidationError):
    """An operation requiring an acyclic graph found a directed cycle."""


class NotSeriesParallelError(FtnetError):
    """The given two-terminal graph admits no series-parallel decomposition."""


class BudgetExceededError(FtnetError):
    """A configured enumeration or state budget was exhausted.

    Oracles and exhaustive subroutines abort rather than approximate.
    """


class InfeasibleError(FtnetError):
    """The instance (or subproblem) has no feasible solution.

    `cut` carries arc ids of a violating cut or fault scenario when one
    is available.
    """

    def __init__(self, message: str, cut: tuple[int, ...] | None = None):
        super().__init__(message)
        self.cut = cut
