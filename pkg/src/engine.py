"""Split-error propagation along a mixing path.

A split of a parent of total volume T keeps (T/2)(1+eps) under PLUS,
(T/2)(1-eps) under MINUS and T/2 under SKIP; both daughters inherit the
parent concentration. Every mix adds one unit droplet of sample or buffer.
Steps are evaluated strictly in order, so float results are reproducible.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from core import (
    Backend,
    DropletState,
    ErrorVector,
    MixSplitPlan,
    Reagent,
    Scalar,
    SimulationResult,
    SplitDisposition,
    StepTrace,
    VectorLengthError,
)

logger = logging.getLogger(__name__)


def mix_op(carried: DropletState, reagent: Reagent) -> DropletState:
    """Merge the carried droplet with one unit droplet of `reagent`."""
    volume = carried.volume + 1
    return DropletState(
        concentration=(carried.concentration * carried.volume + reagent.cf_value) / volume,
        volume=volume,
    )


def split_op(
    parent: DropletState, disposition: SplitDisposition, epsilon: Scalar
) -> Tuple[DropletState, DropletState]:
    """Split into (kept, discarded) daughters."""
    if not 0 <= epsilon < 1:
        raise ValueError(f"split-error magnitude {epsilon} outside [0, 1)")
    half = parent.volume / 2
    if disposition is SplitDisposition.PLUS:
        kept_volume = half * (1 + epsilon)
        discarded_volume = half * (1 - epsilon)
    elif disposition is SplitDisposition.MINUS:
        kept_volume = half * (1 - epsilon)
        discarded_volume = half * (1 + epsilon)
    else:
        kept_volume = discarded_volume = half
    c = parent.concentration
    return (
        DropletState(concentration=c, volume=kept_volume),
        DropletState(concentration=c, volume=discarded_volume),
    )


def _check_length(plan: MixSplitPlan, vector: ErrorVector) -> None:
    if len(vector) != plan.accuracy - 1:
        raise VectorLengthError(
            f"error vector {vector} has {len(vector)} entries; plan for {plan.target} needs {plan.accuracy - 1}"
        )


def simulate(
    plan: MixSplitPlan,
    vector: ErrorVector,
    backend: Backend = Backend.FLOAT,
    final_split: SplitDisposition = SplitDisposition.SKIP,
    record_trace: bool = True,
) -> SimulationResult:
    """Run the plan with a split disposition after each of O_1..O_{n-1}.

    `final_split` applies to O_n with the magnitude of O_{n-1} (or epsilon);
    it moves the final volume only.
    """
    _check_length(plan, vector)
    n = plan.accuracy
    one = backend.coerce(1)

    carried = DropletState(concentration=one, volume=one)
    post_mix = mix_op(carried, Reagent.BUFFER)
    trace: List[StepTrace] = []

    for step in range(1, n + 1):
        if step < n:
            disposition = vector.entries[step - 1]
            epsilon = backend.coerce(vector.magnitude(step))
        else:
            disposition = final_split
            epsilon = backend.coerce(vector.magnitude(n - 1) if n > 1 else vector.epsilon)
        kept, discarded = split_op(post_mix, disposition, epsilon)
        if record_trace:
            trace.append(StepTrace(
                op_index=step,
                disposition=disposition,
                pre_mix=carried,
                post_mix=post_mix,
                kept=kept,
                discarded=discarded,
            ))
        if step < n:
            carried = kept
            post_mix = mix_op(kept, plan.reagent(step))

    produced = kept.concentration
    cf_error = produced - plan.target.value(backend)
    return SimulationResult(
        target=plan.target,
        vector=vector,
        produced_cf=produced,
        cf_error=cf_error,
        scaled_error=cf_error * plan.target.denominator,
        final_volume=kept.volume,
        trace=tuple(trace),
    )


def recurrence_eval(
    plan: MixSplitPlan, vector: ErrorVector, backend: Backend = Backend.FLOAT
) -> Tuple[Scalar, Scalar]:
    """(C_n, V_n) from the P_i/Q_i recurrences.

    P_0 = Q_0 = 1/2 and eps_0 = r_0 = 0;
    P_i = P_{i-1}(1 +- eps_{i-1}) + 2^(i-2) r_{i-1},
    Q_i = Q_{i-1}(1 +- eps_{i-1}) + 2^(i-2),
    C_i = P_i / Q_i and V_i = Q_i / 2^(i-1).
    """
    _check_length(plan, vector)
    n = plan.accuracy
    p = q = backend.coerce(Fraction(1, 2))
    for i in range(1, n + 1):
        if i == 1:
            factor, r = backend.coerce(1), 0
        else:
            factor = 1 + backend.coerce(vector.signed_epsilon(i - 1))
            r = plan.reagent(i - 1).cf_value
        scale = backend.coerce(Fraction(2) ** (i - 2))
        p = p * factor + scale * r
        q = q * factor + scale
    return p / q, q / backend.coerce(2 ** (n - 1))


def waste_mass(result: SimulationResult) -> Scalar:
    """Sample content of every discarded daughter before O_n."""
    return sum((s.discarded.mass for s in result.trace[:-1]), result.produced_cf * 0)


def final_mass(result: SimulationResult) -> Scalar:
    """Sample content of the two daughters of O_n."""
    last = result.trace[-1]
    return last.kept.mass + last.discarded.mass


def trace_records(result: SimulationResult) -> List[Dict[str, Any]]:
    """Per-step records for JSON export."""
    return [
        {
            "op": s.op_index,
            "cf": float(s.post_mix.concentration),
            "total_volume": float(s.post_mix.volume),
            "kept_volume": float(s.kept.volume),
            "disposition": s.disposition.value,
        }
        for s in result.trace
    ]
