"""Exception hierarchy shared by all equipart modules."""

from __future__ import annotations


class EquipartError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(EquipartError):
    """Malformed arguments: bad polygon, m < 3, non-prime p, schema violations."""


class ContainmentError(EquipartError):
    """A cell was expected to lie inside the body but does not."""


class InvalidMeasureError(EquipartError):
    """Density sampled negative, or total mass is not positive."""


class InvalidConfigurationError(EquipartError):
    """Sites are duplicated or closer than the separation threshold."""


class DegenerateProblemError(EquipartError):
    """The transport solver cannot keep every cell nonempty."""


class ConvergenceError(EquipartError):
    """Iteration budget exhausted; carries the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NoSolutionFoundError(EquipartError):
    """All restarts exhausted without meeting tolerances; carries the best iterate.

    Distinct from nonexistence: a failed numerical search certifies nothing.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DegenerateFamilyError(EquipartError):
    """Two functions of a family coincide, so the induced partition is ill defined."""


class SpecValidationError(InvalidInputError):
    """Problem-spec JSON failed validation; carries the offending field path."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
