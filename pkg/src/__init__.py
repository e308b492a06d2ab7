"""
Split-error analysis of (1:1) mix-split dilution.

Modules:
    - config.py          : Analysis configuration (AnalysisConfig)
    - dilution.py        : Target parsing and twoWayMix plans
    - engine.py          : Mix/split primitives and plan simulation
    - closed_forms.py    : Single- and triple-error closed forms
    - analysis.py        : Enumeration, worst case, criticality, sweeps
    - sequencing_graph.py: Plan JSON and DOT sequencing graphs
    - summaries.py       : Human-readable run summaries
    - cli.py             : dmfb-split command line
"""

from .analysis import (
    classify_critical_steps,
    enumerate_error_vectors,
    gray_position,
    sweep_targets,
    worst_case,
)
from .closed_forms import closed_form_single_error, closed_form_triple_error
from .config import AnalysisConfig
from .dilution import approximate_cf, build_plan, parse_target
from .engine import mix_op, recurrence_eval, simulate, split_op

__all__ = [
    "AnalysisConfig",
    "approximate_cf",
    "build_plan",
    "parse_target",
    "mix_op",
    "split_op",
    "simulate",
    "recurrence_eval",
    "closed_form_single_error",
    "closed_form_triple_error",
    "enumerate_error_vectors",
    "worst_case",
    "classify_critical_steps",
    "sweep_targets",
    "gray_position",
]
