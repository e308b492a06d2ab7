"""Closed-form intermediate-CF errors for one and three erroneous steps.

Sign of epsilon: positive when the droplet arriving at the step is the
larger daughter of the previous split, negative when it is the smaller one.
"""

from itertools import product
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from core import Backend, DropletState, Reagent, Scalar, SplitDisposition

from .engine import mix_op, split_op

ArrayLike = Union[Scalar, np.ndarray]

TRIPLE_PATTERNS: Tuple[str, ...] = tuple("".join(p) for p in product("+-", repeat=3))


def closed_form_single_error(c: ArrayLike, epsilon: ArrayLike, reagent: Reagent) -> ArrayLike:
    """Ideal minus erroneous intermediate CF after one mix.

    Sample: eps(1-c)/(4+2eps). Buffer: -eps c/(4+2eps). Works elementwise on
    numpy arrays.
    """
    denominator = 4 + 2 * epsilon
    if reagent is Reagent.SAMPLE:
        return epsilon * (1 - c) / denominator
    return -epsilon * c / denominator


def single_error_surface(
    c_values: Sequence[float], eps_values: Sequence[float], reagent: Reagent
) -> np.ndarray:
    """Grid of closed_form_single_error, shape (len(c_values), len(eps_values))."""
    c_grid, eps_grid = np.meshgrid(np.asarray(c_values, dtype=float), np.asarray(eps_values, dtype=float), indexing="ij")
    return closed_form_single_error(c_grid, eps_grid, reagent)


def _ideal_steps(c: Scalar, reagents: Sequence[Reagent]) -> Scalar:
    for reagent in reagents:
        c = (c + reagent.cf_value) / 2
    return c


def closed_form_triple_error(
    c: Scalar,
    epsilons: Tuple[Scalar, Scalar, Scalar],
    reagents: Tuple[Reagent, Reagent, Reagent],
    backend: Backend = Backend.FLOAT,
) -> Scalar:
    """Erroneous minus ideal CF after three consecutive erroneous steps.

    Starts from a two-unit droplet at CF `c`; each step splits with the
    signed magnitude and mixes the next reagent. The ideal reference is the
    error-free composition (c + r_1 + 2 r_2 + 4 r_3)/8.
    """
    if len(epsilons) != 3 or len(reagents) != 3:
        raise ValueError("triple error needs three magnitudes and three reagents")
    c = backend.coerce(c)
    state = DropletState(concentration=c, volume=backend.coerce(2))
    for signed, reagent in zip(epsilons, reagents):
        signed = backend.coerce(signed)
        kept, _ = split_op(state, SplitDisposition.from_sign(signed), abs(signed))
        state = mix_op(kept, reagent)
    return state.concentration - _ideal_steps(c, reagents)


def triple_error_family(
    c_values: Sequence[float],
    epsilon: Scalar,
    reagents: Tuple[Reagent, Reagent, Reagent],
    backend: Backend = Backend.FLOAT,
) -> Dict[str, List[Scalar]]:
    """The eight sign branches over a grid of starting CFs, keyed by pattern ("+-+")."""
    family: Dict[str, List[Scalar]] = {}
    for pattern in TRIPLE_PATTERNS:
        signed = tuple(epsilon if s == "+" else -epsilon for s in pattern)
        family[pattern] = [closed_form_triple_error(c, signed, reagents, backend) for c in c_values]
    return family


def dominant_triple_branches(family: Dict[str, List[Scalar]]) -> List[str]:
    """Pattern with the largest |error| at each grid point; first pattern wins ties."""
    patterns = list(family)
    magnitudes = np.abs(np.array([[float(v) for v in family[p]] for p in patterns]))
    return [patterns[i] for i in np.argmax(magnitudes, axis=0)]


def single_error_via_engine(c: Scalar, epsilon: Scalar, reagent: Reagent) -> Scalar:
    """Single-step error (ideal minus erroneous) from split_op then mix_op."""
    parent = DropletState(concentration=c, volume=c * 0 + 2)
    kept, _ = split_op(parent, SplitDisposition.from_sign(epsilon), abs(epsilon))
    return (c + reagent.cf_value) / 2 - mix_op(kept, reagent).concentration

