"""Arithmetic backends.

Two interchangeable number types flow through the engine: binary64 floats
(default) and exact rationals. Every operation is written once and runs on
whichever type its inputs carry; `Backend.coerce` is the only place a value
changes type.
"""

from enum import Enum
from fractions import Fraction
from typing import Union

Scalar = Union[float, Fraction]


class Backend(str, Enum):
    """Number type used for a computation."""

    FLOAT = "float"
    RATIONAL = "rational"

    def coerce(self, value: Union[int, float, str, Fraction]) -> Scalar:
        """Convert a value into this backend's number type.

        Floats entering the rational backend are read through their shortest
        decimal repr, so 0.07 becomes exactly 7/100.
        """
        if self is Backend.RATIONAL:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, float):
                return Fraction(repr(float(value)))
            return Fraction(value)
        return float(Fraction(value)) if isinstance(value, str) else float(value)

    @classmethod
    def of(cls, value: Scalar) -> "Backend":
        """Backend a value already belongs to."""
        return cls.RATIONAL if isinstance(value, Fraction) else cls.FLOAT


def parse_epsilon(text: str) -> Fraction:
    """Parse a split-error magnitude given as a decimal ("0.07") or percentage ("7%").

    Returns an exact Fraction in [0, 1).
    """
    raw = text.strip()
    try:
        if raw.endswith("%"):
            value = Fraction(raw[:-1].strip()) / 100
        else:
            value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed split-error magnitude {text!r}") from exc
    if not 0 <= value < 1:
        raise ValueError(f"split-error magnitude {text!r} outside [0, 1)")
    return value


def format_number(value: Scalar) -> str:
    """Render a number for CSV/JSON output: '.' decimal separator, no grouping."""
    return repr(float(value))
