"""Exception hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI maps it to.
"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from app.models import SmoothnessVerdict


class HPolyError(Exception):
    """Base class for all errors raised by the package."""

    exit_code: int = 1


class InvalidInputError(HPolyError, ValueError):
    """A type string, subset, node name or numeric parameter is out of range."""

    exit_code = 2


class NotSmoothError(HPolyError):
    """The requested operation needs a combinatorially smooth J."""

    exit_code = 3

    def __init__(self, message: str, verdict: Optional["SmoothnessVerdict"] = None):
        super().__init__(message)
        self.verdict = verdict


class DeltaUndefinedError(NotSmoothError):
    """Some s outside J is attached to two or more components of J."""


class EnumerationCapError(HPolyError):
    """An enumeration would exceed the configured cap."""

    exit_code = 4

    def __init__(self, what: str, requested: int, cap: int, setting: str = "HPOLY_MAX_ELEMENTS"):
        super().__init__(
            f"Refusing to enumerate {what}: {requested} exceeds the cap of {cap} (raise it with {setting})."
        )
        self.what = what
        self.requested = requested
        self.cap = cap
        self.setting = setting


class OrbitFitError(HPolyError):
    """Measured orbit sizes are not of the form (q-1)^a q^b for a unique (a, b)."""


class PartitionCheckError(HPolyError):
    """The enumerated orbits do not partition the ambient set of matrices."""
