"""Pydantic schemas for dilution plans, droplets and split-error results."""

from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .numeric import Backend, Scalar


class Reagent(str, Enum):
    """Fluid dispensed into a mix-split step."""

    SAMPLE = "sample"
    BUFFER = "buffer"

    @property
    def cf_value(self) -> int:
        return 1 if self is Reagent.SAMPLE else 0

    @classmethod
    def from_bit(cls, bit: int) -> "Reagent":
        return cls.SAMPLE if bit else cls.BUFFER

    def complement(self) -> "Reagent":
        return Reagent.BUFFER if self is Reagent.SAMPLE else Reagent.SAMPLE


class TargetCF(BaseModel):
    """Concentration factor x/2^n in lowest terms (x odd)."""

    model_config = ConfigDict(frozen=True)

    numerator: int
    accuracy: int = Field(ge=1, description="Number of mix-split steps n")

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data: Any) -> Any:
        if isinstance(data, dict):
            x, n = data.get("numerator"), data.get("accuracy")
            if isinstance(x, int) and isinstance(n, int) and x > 0:
                while x % 2 == 0 and n > 0:
                    x //= 2
                    n -= 1
                data = {**data, "numerator": x, "accuracy": n}
        return data

    @model_validator(mode="after")
    def _check_range(self) -> "TargetCF":
        if not 0 < self.numerator < self.denominator:
            raise ValueError(f"numerator {self.numerator} outside (0, {self.denominator})")
        return self

    @property
    def denominator(self) -> int:
        return 1 << self.accuracy

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def value(self, backend: Backend = Backend.FLOAT) -> Scalar:
        return backend.coerce(self.fraction)

    def bit(self, index: int) -> int:
        return (self.numerator >> index) & 1

    def complement(self) -> "TargetCF":
        return TargetCF(numerator=self.denominator - self.numerator, accuracy=self.accuracy)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


class MixSplitPlan(BaseModel):
    """Reagent schedule realizing a target under ideal (1:1) mix-split.

    O_1 mixes one sample and one buffer droplet; `reagents[i-1]` is r_i, the
    fluid mixed with the carried droplet at O_{i+1}.
    """

    model_config = ConfigDict(frozen=True)

    target: TargetCF
    first_op: Tuple[Reagent, Reagent] = (Reagent.SAMPLE, Reagent.BUFFER)
    reagents: Tuple[Reagent, ...]

    @model_validator(mode="after")
    def _check_schedule(self) -> "MixSplitPlan":
        if self.first_op != (Reagent.SAMPLE, Reagent.BUFFER):
            raise ValueError("first operation must mix one sample and one buffer droplet")
        n = self.target.accuracy
        if len(self.reagents) != n - 1:
            raise ValueError(f"plan for {self.target} needs {n - 1} reagents, got {len(self.reagents)}")
        realized = 1 + sum(r.cf_value << i for i, r in enumerate(self.reagents, start=1))
        if realized != self.target.numerator:
            raise ValueError(f"schedule realizes {realized}/{self.target.denominator}, not {self.target}")
        return self

    @property
    def accuracy(self) -> int:
        return self.target.accuracy

    def reagent(self, step: int) -> Reagent:
        """r_step, 1-indexed."""
        return self.reagents[step - 1]


class DropletState(BaseModel):
    """Concentration and volume (in 1X units) of a droplet."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    concentration: Scalar
    volume: Scalar

    @model_validator(mode="after")
    def _check_physical(self) -> "DropletState":
        if not 0 <= self.concentration <= 1:
            raise ValueError(f"concentration {self.concentration} outside [0, 1]")
        if not self.volume > 0:
            raise ValueError(f"volume {self.volume} must be positive")
        return self

    @property
    def mass(self) -> Scalar:
        """Sample content, in units of one 1X sample droplet."""
        return self.concentration * self.volume


class SplitDisposition(str, Enum):
    """Which daughter of a split is carried forward."""

    PLUS = "+"
    MINUS = "-"
    SKIP = "0"

    @property
    def sign(self) -> int:
        return {"+": 1, "-": -1, "0": 0}[self.value]

    @classmethod
    def parse(cls, symbol: str) -> "SplitDisposition":
        try:
            return _DISPOSITION_SYMBOLS[symbol]
        except KeyError:
            raise ValueError(f"unknown split disposition {symbol!r}") from None

    @classmethod
    def from_sign(cls, value: Scalar) -> "SplitDisposition":
        if value > 0:
            return cls.PLUS
        if value < 0:
            return cls.MINUS
        return cls.SKIP


_DISPOSITION_SYMBOLS = {
    "+": SplitDisposition.PLUS,
    "-": SplitDisposition.MINUS,
    "−": SplitDisposition.MINUS,
    "0": SplitDisposition.SKIP,
    "φ": SplitDisposition.SKIP,
    "ϕ": SplitDisposition.SKIP,
}


def _check_magnitude(value: Scalar) -> None:
    if not 0 <= value < 1:
        raise ValueError(f"split-error magnitude {value} outside [0, 1)")


class ErrorVector(BaseModel):
    """Split dispositions for O_1..O_{n-1} with a shared magnitude epsilon."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: Tuple[SplitDisposition, ...]
    epsilon: Scalar = 0.0
    step_epsilons: Optional[Tuple[Scalar, ...]] = None

    @model_validator(mode="after")
    def _check_magnitudes(self) -> "ErrorVector":
        _check_magnitude(self.epsilon)
        if self.step_epsilons is not None:
            if len(self.step_epsilons) != len(self.entries):
                raise ValueError("step_epsilons must have one magnitude per entry")
            for value in self.step_epsilons:
                _check_magnitude(value)
        return self

    @classmethod
    def parse(cls, text: str, epsilon: Scalar = 0.0) -> "ErrorVector":
        """Read a compact vector such as "-0+00-" (0 or φ for no error)."""
        symbols = [s for s in text.strip().strip("[]") if s not in ", "]
        return cls(entries=tuple(SplitDisposition.parse(s) for s in symbols), epsilon=epsilon)

    @classmethod
    def uniform(cls, length: int, disposition: SplitDisposition, epsilon: Scalar = 0.0) -> "ErrorVector":
        return cls(entries=(disposition,) * length, epsilon=epsilon)

    @classmethod
    def single(cls, length: int, step: int, disposition: SplitDisposition, epsilon: Scalar) -> "ErrorVector":
        """Vector with one error at `step` (1-indexed) and no error elsewhere."""
        entries = [SplitDisposition.SKIP] * length
        entries[step - 1] = disposition
        return cls(entries=tuple(entries), epsilon=epsilon)

    def magnitude(self, step: int) -> Scalar:
        """Split-error magnitude at O_step, 1-indexed."""
        if self.step_epsilons is not None:
            return self.step_epsilons[step - 1]
        return self.epsilon

    def signed_epsilon(self, step: int) -> Scalar:
        return self.entries[step - 1].sign * self.magnitude(step)

    @property
    def is_full_sign(self) -> bool:
        return SplitDisposition.SKIP not in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "".join(d.value for d in self.entries)


class StepTrace(BaseModel):
    """Droplet states around one mix-split operation."""

    model_config = ConfigDict(frozen=True)

    op_index: int
    disposition: SplitDisposition
    pre_mix: DropletState
    post_mix: DropletState
    kept: DropletState
    discarded: DropletState


class SimulationResult(BaseModel):
    """Outcome of running a plan under an error vector."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: TargetCF
    vector: ErrorVector
    produced_cf: Scalar
    cf_error: Scalar
    scaled_error: Scalar
    final_volume: Scalar
    trace: Tuple[StepTrace, ...] = ()

    @property
    def abs_scaled_error(self) -> Scalar:
        return abs(self.scaled_error)


class EnumerationRow(BaseModel):
    """One error vector of an exhaustive enumeration."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vector: ErrorVector
    produced_cf: Scalar
    cf_error: Scalar
    scaled_error: Scalar
    scaled_abs_error: Scalar
    within_tolerance: bool
    gray_position: Optional[int] = None


class CriticalStep(BaseModel):
    """Single-error outcome at one step; errors are signed and unscaled."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    step: int
    larger_produced_cf: Scalar
    smaller_produced_cf: Scalar
    larger_error: Scalar
    smaller_error: Scalar
    critical: bool


class CriticalityReport(BaseModel):
    """Critical / non-critical classification of every step but the last."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: TargetCF
    epsilon: Scalar
    tolerance: Scalar
    steps: Tuple[CriticalStep, ...]

    @property
    def critical_steps(self) -> List[int]:
        return [s.step for s in self.steps if s.critical]

    def scaled(self, value: Scalar) -> Scalar:
        return value * self.target.denominator


class SweepRow(BaseModel):
    """Worst case for one target of an accuracy level."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: TargetCF
    max_scaled_error: Scalar
    argmax_vector: ErrorVector
