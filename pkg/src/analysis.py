"""Exhaustive error-vector analysis: enumeration, worst case, criticality, sweeps.

Sign vectors are ordered by gray position: a vector maps to a gray word with
+ -> 0, - -> 1 and O_1 as the most significant bit, and its position is the
decoded binary index. Adjacent positions differ in one step's sign. The
skip-inclusive space is ordered lexicographically with no-error < + < -.
Argmax ties go to the earliest vector in that order.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from core import (
    BaseRunner,
    CriticalityReport,
    CriticalStep,
    EnumerationRow,
    ErrorVector,
    MixSplitPlan,
    RunConfig,
    Scalar,
    SearchSpaceError,
    SplitDisposition,
    SweepRow,
    TargetCF,
)

from .config import default_tolerance
from .dilution import build_plan
from .engine import simulate

logger = logging.getLogger(__name__)

_SKIP_ORDER = (SplitDisposition.SKIP, SplitDisposition.PLUS, SplitDisposition.MINUS)

VectorItem = Tuple[ErrorVector, Optional[int]]


def to_gray(index: int) -> int:
    return index ^ (index >> 1)


def from_gray(code: int) -> int:
    index = code
    shift = code >> 1
    while shift:
        index ^= shift
        shift >>= 1
    return index


def gray_position(vector: ErrorVector) -> int:
    """Position of a full sign vector on the gray-ordered axis."""
    if not vector.is_full_sign:
        raise ValueError(f"gray position needs a sign at every step, got {vector}")
    word = 0
    for disposition in vector.entries:
        word = (word << 1) | (disposition is SplitDisposition.MINUS)
    return from_gray(word)


def gray_vector(position: int, length: int, epsilon: Scalar = 0.0) -> ErrorVector:
    """Full sign vector at a gray position (inverse of gray_position)."""
    if not 0 <= position < (1 << length):
        raise ValueError(f"gray position {position} outside [0, {1 << length})")
    word = to_gray(position)
    entries = tuple(
        SplitDisposition.MINUS if (word >> (length - 1 - j)) & 1 else SplitDisposition.PLUS
        for j in range(length)
    )
    return ErrorVector(entries=entries, epsilon=epsilon)


def _resolve_positions(plan: MixSplitPlan, positions: Optional[Iterable[int]]) -> List[int]:
    length = plan.accuracy - 1
    chosen = sorted(set(positions)) if positions is not None else list(range(1, length + 1))
    if not chosen:
        raise ValueError("at least one error position is required")
    bad = [p for p in chosen if not 1 <= p <= length]
    if bad:
        raise ValueError(f"positions {bad} outside 1..{length} for {plan.target}")
    return chosen


def _sign_space(length: int, positions: Sequence[int], epsilon: Scalar) -> Iterator[VectorItem]:
    k = len(positions)
    for index in range(1 << k):
        word = to_gray(index)
        entries = [SplitDisposition.SKIP] * length
        for j, step in enumerate(positions):
            bit = (word >> (k - 1 - j)) & 1
            entries[step - 1] = SplitDisposition.MINUS if bit else SplitDisposition.PLUS
        yield ErrorVector(entries=tuple(entries), epsilon=epsilon), index


def _skip_space(length: int, positions: Sequence[int], epsilon: Scalar) -> Iterator[VectorItem]:
    for choice in product(_SKIP_ORDER, repeat=len(positions)):
        entries = [SplitDisposition.SKIP] * length
        for step, disposition in zip(positions, choice):
            entries[step - 1] = disposition
        yield ErrorVector(entries=tuple(entries), epsilon=epsilon), None


class VectorEnumerator(BaseRunner[VectorItem, EnumerationRow]):
    """Simulates one plan under many error vectors."""

    def __init__(self, plan: MixSplitPlan, tolerance: Fraction, config: RunConfig):
        super().__init__(config)
        self.plan = plan
        backend = config.backend
        self.bound = backend.coerce(tolerance) * plan.target.denominator

    def run_item(self, item: VectorItem) -> EnumerationRow:
        vector, position = item
        result = simulate(self.plan, vector, backend=self.config.backend, record_trace=False)
        scaled_abs = abs(result.scaled_error)
        return EnumerationRow(
            vector=vector,
            produced_cf=result.produced_cf,
            cf_error=result.cf_error,
            scaled_error=result.scaled_error,
            scaled_abs_error=scaled_abs,
            within_tolerance=scaled_abs < self.bound,
            gray_position=position,
        )


def enumerate_error_vectors(
    plan: MixSplitPlan,
    epsilon: Scalar,
    positions: Optional[Iterable[int]] = None,
    include_skip: bool = False,
    tolerance: Optional[Fraction] = None,
    config: Optional[RunConfig] = None,
) -> List[EnumerationRow]:
    """Every sign (or sign/no-error) assignment over `positions`; other steps error-free.

    Rows come in gray order for sign spaces and lexicographic order otherwise.
    """
    config = config or RunConfig()
    chosen = _resolve_positions(plan, positions)
    length = plan.accuracy - 1
    space = _skip_space if include_skip else _sign_space
    tolerance = tolerance if tolerance is not None else default_tolerance(plan.target)
    enumerator = VectorEnumerator(plan, tolerance, config)
    rows = enumerator.run_all(space(length, chosen, epsilon))
    logger.debug("enumerated %d vectors for %s at epsilon %s", len(rows), plan.target, epsilon)
    return rows


def within_tolerance_count(rows: Iterable[EnumerationRow]) -> int:
    return sum(1 for row in rows if row.within_tolerance)


def argmax_row(rows: Sequence[EnumerationRow]) -> EnumerationRow:
    """Largest |scaled error|; the earliest row wins ties."""
    best = rows[0]
    for row in rows[1:]:
        if row.scaled_abs_error > best.scaled_abs_error:
            best = row
    return best


class WorstCase(NamedTuple):
    max_scaled_abs_error: Scalar
    argmax: ErrorVector


def worst_case(
    plan: MixSplitPlan,
    epsilon: Scalar,
    include_skip: bool = False,
    config: Optional[RunConfig] = None,
) -> WorstCase:
    """Exhaustive max of |CF-error| x 2^n over the full vector space."""
    config = config or RunConfig()
    if plan.accuracy == 1:
        vector = ErrorVector(entries=(), epsilon=epsilon)
        result = simulate(plan, vector, backend=config.backend, record_trace=False)
        return WorstCase(abs(result.scaled_error), vector)
    rows = enumerate_error_vectors(plan, epsilon, include_skip=include_skip, config=config)
    best = argmax_row(rows)
    return WorstCase(best.scaled_abs_error, best.vector)


def classify_critical_steps(
    plan: MixSplitPlan,
    epsilon: Scalar,
    tolerance: Optional[Fraction] = None,
    config: Optional[RunConfig] = None,
) -> CriticalityReport:
    """A step is critical when a single split-error there reaches the tolerance."""
    config = config or RunConfig()
    backend = config.backend
    tolerance = tolerance if tolerance is not None else default_tolerance(plan.target)
    bound = backend.coerce(tolerance) * plan.target.denominator
    length = plan.accuracy - 1

    steps = []
    for step in range(1, length + 1):
        larger = simulate(plan, ErrorVector.single(length, step, SplitDisposition.PLUS, epsilon),
                          backend=backend, record_trace=False)
        smaller = simulate(plan, ErrorVector.single(length, step, SplitDisposition.MINUS, epsilon),
                           backend=backend, record_trace=False)
        worst = max(abs(larger.scaled_error), abs(smaller.scaled_error))
        steps.append(CriticalStep(
            step=step,
            larger_produced_cf=larger.produced_cf,
            smaller_produced_cf=smaller.produced_cf,
            larger_error=larger.cf_error,
            smaller_error=smaller.cf_error,
            critical=worst >= bound,
        ))
    report = CriticalityReport(
        target=plan.target,
        epsilon=backend.coerce(epsilon),
        tolerance=backend.coerce(tolerance),
        steps=tuple(steps),
    )
    logger.info("critical steps for %s at epsilon %s: %s", plan.target, epsilon, report.critical_steps)
    return report


class TargetSweeper(BaseRunner[TargetCF, SweepRow]):
    """Worst case for each target of one accuracy level."""

    def __init__(self, epsilon: Scalar, config: RunConfig):
        super().__init__(config)
        self.epsilon = epsilon
        self.inner = RunConfig(workers=1, backend=config.backend)

    def run_item(self, item: TargetCF) -> SweepRow:
        value, vector = worst_case(build_plan(item), self.epsilon, config=self.inner)
        return SweepRow(target=item, max_scaled_error=value, argmax_vector=vector)


def sweep_targets(accuracy: int, epsilon: Scalar, config: Optional[RunConfig] = None) -> List[SweepRow]:
    """Worst case (sign space) for every odd numerator x/2^n."""
    if accuracy < 2:
        raise ValueError(f"sweep needs accuracy >= 2, got {accuracy}")
    config = config or RunConfig()
    targets = [TargetCF(numerator=x, accuracy=accuracy) for x in range(1, 1 << accuracy, 2)]
    rows = TargetSweeper(epsilon, config).run_all(targets)
    logger.info("swept %d targets at accuracy %d", len(rows), accuracy)
    return rows


def sweep_maxima(rows: Sequence[SweepRow], rel_tol: float = 1e-9) -> Tuple[Scalar, List[int]]:
    """Global maximum and every numerator attaining it (within rel_tol for floats)."""
    peak = max(row.max_scaled_error for row in rows)
    slack = abs(peak) * rel_tol if not isinstance(peak, Fraction) else 0
    return peak, [row.target.numerator for row in rows if peak - row.max_scaled_error <= slack]


def search_space_size(accuracy: int, include_skip: bool = False) -> int:
    """Number of error vectors for one target."""
    return (3 if include_skip else 2) ** max(accuracy - 1, 0)


def check_search_space(
    accuracy: int,
    include_skip: bool,
    max_sign_accuracy: int,
    max_skip_accuracy: int,
    force: bool = False,
    targets: int = 1,
) -> int:
    """Total simulations for a search; raises SearchSpaceError past the limits unless forced."""
    vectors = search_space_size(accuracy, include_skip) * targets
    limit = max_skip_accuracy if include_skip else max_sign_accuracy
    if accuracy > limit and not force:
        raise SearchSpaceError(
            f"accuracy {accuracy} exceeds the exhaustive limit {limit} "
            f"({vectors:,} simulations); pass --force to run anyway",
            vectors,
        )
    return vectors
