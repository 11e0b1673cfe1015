"""Exception types raised by xy-disentangler."""

from typing import Dict, Optional, Tuple


class DisentanglerError(Exception):
    """Base class for every error raised by this package."""

    pass


class DimensionError(DisentanglerError, ValueError):
    """Qubit counts, targets or matrix sizes do not fit together."""

    pass


class ParameterError(DisentanglerError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""

    pass


class ConventionError(DisentanglerError):
    """The convention record is missing, unreadable or not unique.

    When raised by the resolution search, ``residuals`` maps every candidate
    label to its worst residual on the probe grid.
    """

    def __init__(self, message: str, residuals: Optional[Dict[str, float]] = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class ConvergenceError(DisentanglerError):
    """An iterative solver hit its sweep limit."""

    pass


class DegenerateGroundStateError(DisentanglerError):
    """The ground space has more than one basis preimage."""

    def __init__(self, message: str, indices: Tuple[int, ...]):
        super().__init__(message)
        self.indices = indices
