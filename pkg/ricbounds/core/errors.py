"""Exception types shared by the bound, sampling and empirical services."""

from __future__ import annotations

from typing import Optional, Tuple


class RicBoundsError(Exception):
    """Base class for every error raised by ricbounds."""


class DomainError(RicBoundsError, ValueError):
    """Raised when an argument lies outside the domain of a formula."""


class EnumerationCapError(DomainError):
    """Raised when exhaustive support enumeration would exceed the configured cap."""

    def __init__(self, supports: int, cap: int) -> None:
        super().__init__(f"exhaustive enumeration needs {supports} supports; cap is {cap} (RIC_BOUNDS_EXHAUSTIVE_CAP)")
        self.supports = supports
        self.cap = cap


class MatrixFormatError(DomainError):
    """Raised when a matrix dump does not follow the RICM layout."""


class SolverError(RicBoundsError):
    """Raised when a numerical solver cannot produce a certified answer."""


class BracketError(SolverError):
    """Raised when a root bracket cannot be established."""


class NonConvergenceError(SolverError):
    """Raised when an iteration budget is exhausted; keeps the last bracket."""

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None) -> None:
        if bracket is not None:
            message = f"{message} (last bracket [{bracket[0]!r}, {bracket[1]!r}])"
        super().__init__(message)
        self.bracket = bracket


class InfeasibleError(RicBoundsError):
    """Raised when no admissible value satisfies a sampling condition."""


class RegimeWarning(UserWarning):
    """Emitted when constants or coordinates sit outside a theorem's stated regime."""
