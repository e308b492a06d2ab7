"""Target concentration factors and twoWayMix plans.

The plan derives from the binary expansion of the numerator: bit 0 of an odd
x is consumed by the sample droplet of O_1, and bit i selects r_i, the fluid
added at O_{i+1}. Iterating C_{i+1} = (C_i + r_i)/2 from C_1 = 1/2 then lands
on x/2^n.
"""

import logging
import math
import re
from fractions import Fraction
from typing import List, NamedTuple, Optional, Union

from pydantic import ValidationError

from core import (
    ApproximationError,
    Backend,
    DropletState,
    MixSplitPlan,
    Reagent,
    Scalar,
    TargetCF,
    TargetFormatError,
)

logger = logging.getLogger(__name__)

_FRACTION_RE = re.compile(r"^\s*(\d+)\s*/\s*(?:(\d+)|2\s*\^\s*(\d+))\s*$")


def parse_target(text: str, accuracy: Optional[int] = None) -> TargetCF:
    """Parse "x/2^n" ("87/128", "87/2^7") or a decimal with an explicit accuracy."""
    match = _FRACTION_RE.match(text)
    if match:
        numerator = int(match.group(1))
        if match.group(3) is not None:
            exponent = int(match.group(3))
        else:
            denominator = int(match.group(2))
            if denominator < 2 or denominator & (denominator - 1):
                raise TargetFormatError(f"denominator {denominator} of {text!r} is not a power of two")
            exponent = denominator.bit_length() - 1
        return _make_target(numerator, exponent, text)

    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise TargetFormatError(f"malformed target {text!r}") from None
    if accuracy is None:
        raise TargetFormatError(f"decimal target {text!r} needs an explicit accuracy level")
    if not 0 < value < 1:
        raise TargetFormatError(f"target {text!r} outside (0, 1)")
    return _make_target(_nearest_odd_tie(value * (1 << accuracy)), accuracy, text)


def _make_target(numerator: int, accuracy: int, text: str) -> TargetCF:
    if accuracy < 1 or not 0 < numerator < (1 << accuracy):
        raise TargetFormatError(f"target {text!r} outside (0, 1)")
    try:
        return TargetCF(numerator=numerator, accuracy=accuracy)
    except ValidationError as exc:
        raise TargetFormatError(f"invalid target {text!r}: {exc}") from None


def _nearest_odd_tie(scaled: Fraction) -> int:
    """Nearest integer; an exact half rounds to the odd neighbour."""
    low = math.floor(scaled)
    rest = scaled - low
    if rest > Fraction(1, 2):
        return low + 1
    if rest < Fraction(1, 2):
        return low
    return low if low % 2 else low + 1


def approximate_cf(
    value: Union[float, str, Fraction],
    tolerance: Union[float, str, Fraction],
    max_accuracy: int = 30,
) -> TargetCF:
    """Dyadic target with the smallest n such that |x/2^n - value| <= tolerance."""
    exact = Backend.RATIONAL.coerce(value)
    tol = Backend.RATIONAL.coerce(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not 0 < exact < 1:
        raise ValueError(f"value {value} outside (0, 1)")

    for n in range(1, max_accuracy + 1):
        x = min(max(_nearest_odd_tie(exact * (1 << n)), 1), (1 << n) - 1)
        if abs(Fraction(x, 1 << n) - exact) <= tol:
            target = TargetCF(numerator=x, accuracy=n)
            logger.debug("approximated %s within %s by %s", value, tolerance, target)
            return target
    raise ApproximationError(
        f"no x/2^n within {tolerance} of {value} for n <= {max_accuracy}"
    )


def build_plan(target: TargetCF) -> MixSplitPlan:
    """twoWayMix schedule: r_i is bit i of the numerator."""
    reagents = tuple(Reagent.from_bit(target.bit(i)) for i in range(1, target.accuracy))
    return MixSplitPlan(target=target, reagents=reagents)


def complement_plan(plan: MixSplitPlan) -> MixSplitPlan:
    """Plan of (2^n - x)/2^n: sample and buffer swapped in r_1..r_{n-1}."""
    return MixSplitPlan(
        target=plan.target.complement(),
        reagents=tuple(r.complement() for r in plan.reagents),
    )


def intermediate_cfs(plan: MixSplitPlan, backend: Backend = Backend.FLOAT) -> List[Scalar]:
    """Ideal C_1..C_n."""
    half = backend.coerce(Fraction(1, 2))
    values = [half]
    for reagent in plan.reagents:
        values.append((values[-1] + reagent.cf_value) * half)
    return values


def ideal_simulate(plan: MixSplitPlan, backend: Backend = Backend.FLOAT) -> DropletState:
    """Error-free outcome: a unit droplet at x/2^n."""
    return DropletState(concentration=intermediate_cfs(plan, backend)[-1], volume=backend.coerce(1))


class DropletBudget(NamedTuple):
    sample: int
    buffer: int
    waste: int
    target: int

    @property
    def dispensed(self) -> int:
        return self.sample + self.buffer


def droplet_budget(plan: MixSplitPlan) -> DropletBudget:
    """Unit droplets in and out of an error-free run."""
    sample = 1 + sum(r.cf_value for r in plan.reagents)
    n = plan.accuracy
    return DropletBudget(sample=sample, buffer=n + 1 - sample, waste=n - 1, target=2)
