"""Exception hierarchy."""

from typing import Optional


class DilutionError(ValueError):
    """Base class for invalid dilution inputs."""


class TargetFormatError(DilutionError):
    """Target text is malformed or its denominator is not a power of two."""


class ApproximationError(DilutionError):
    """No dyadic target within tolerance below the accuracy cap."""


class VectorLengthError(DilutionError):
    """Error-vector length does not match the plan."""


class SearchSpaceError(DilutionError):
    """Exhaustive search refused because the vector space is too large."""

    def __init__(self, message: str, vectors: int):
        super().__init__(message)
        self.vectors = vectors


class UsageError(DilutionError):
    """Command-line usage error, naming the offending flag when known."""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag
