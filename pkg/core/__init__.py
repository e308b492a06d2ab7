"""
Core utilities for dmfb-split-error.

Framework code shared by every analysis: schemas, arithmetic backends,
the threaded runner and the artifact writer. Domain logic lives in src/.
"""

from .base_runner import BaseRunner, RunConfig
from .exceptions import (
    ApproximationError,
    DilutionError,
    SearchSpaceError,
    TargetFormatError,
    UsageError,
    VectorLengthError,
)
from .numeric import Backend, Scalar, format_number, parse_epsilon
from .output_writer import OutputWriter
from .schemas import (
    CriticalityReport,
    CriticalStep,
    DropletState,
    EnumerationRow,
    ErrorVector,
    MixSplitPlan,
    Reagent,
    SimulationResult,
    SplitDisposition,
    StepTrace,
    SweepRow,
    TargetCF,
)

__all__ = [
    "BaseRunner",
    "RunConfig",
    "ApproximationError",
    "DilutionError",
    "SearchSpaceError",
    "TargetFormatError",
    "UsageError",
    "VectorLengthError",
    "Backend",
    "Scalar",
    "format_number",
    "parse_epsilon",
    "OutputWriter",
    "CriticalityReport",
    "CriticalStep",
    "DropletState",
    "EnumerationRow",
    "ErrorVector",
    "MixSplitPlan",
    "Reagent",
    "SimulationResult",
    "SplitDisposition",
    "StepTrace",
    "SweepRow",
    "TargetCF",
]
