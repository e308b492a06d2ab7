"""
╔══════════════════════════════════════════════════════════════════════════════╗
║                      SPLIT-ERROR ANALYSIS CONFIGURATION                       ║
║                                                                               ║
║  Settings shared by every exhaustive analysis of a (1:1) mix-split plan:     ║
║  split-error magnitude, tolerance, vector space and search-space guards.     ║
║                                                                               ║
║  Tolerance is on the CF scale; None means 0.5/2^n for the target at hand.    ║
╚══════════════════════════════════════════════════════════════════════════════╝
"""

from fractions import Fraction
from typing import Optional

from pydantic import ConfigDict, Field, field_validator

from core import RunConfig, TargetCF


class AnalysisConfig(RunConfig):
    """
    Split-error analysis configuration.

    Inherited from RunConfig:
        - workers: int      # Thread count (env SPLIT_ERROR_WORKERS)
        - backend: Backend  # float or rational arithmetic
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    # ══════════════════════════════════════════════════════════════════════════
    #  ERROR MODEL
    # ══════════════════════════════════════════════════════════════════════════

    epsilon: Fraction = Field(
        default=Fraction(7, 100),
        description="Volumetric split-error magnitude, fraction of the ideal daughter volume"
    )

    tolerance: Optional[Fraction] = Field(
        default=None,
        description="Allowed |CF-error|; None means 0.5/2^n"
    )

    include_skip: bool = Field(
        default=False,
        description="Search {+, -, no-error} per step instead of {+, -}"
    )

    # ══════════════════════════════════════════════════════════════════════════
    #  LIMITS
    # ══════════════════════════════════════════════════════════════════════════

    max_accuracy: int = Field(
        default=30,
        ge=1,
        le=60,
        description="Largest accuracy level approximate_cf may return"
    )

    max_sign_accuracy: int = Field(
        default=24,
        ge=2,
        description="Largest n searched over the 2^(n-1) sign space without force"
    )

    max_skip_accuracy: int = Field(
        default=14,
        ge=2,
        description="Largest n searched over the 3^(n-1) space without force"
    )

    force: bool = Field(
        default=False,
        description="Bypass the search-space guard"
    )

    @field_validator("epsilon")
    @classmethod
    def _epsilon_range(cls, value: Fraction) -> Fraction:
        if not 0 <= value < 1:
            raise ValueError(f"epsilon {value} outside [0, 1)")
        return value

    @field_validator("tolerance")
    @classmethod
    def _tolerance_positive(cls, value: Optional[Fraction]) -> Optional[Fraction]:
        if value is not None and value <= 0:
            raise ValueError("tolerance must be positive")
        return value

    def tolerance_for(self, target: TargetCF) -> Fraction:
        """Tolerance on the CF scale for one target."""
        if self.tolerance is not None:
            return self.tolerance
        return default_tolerance(target)


def default_tolerance(target: TargetCF) -> Fraction:
    """Half a least-significant step: 0.5/2^n."""
    return Fraction(1, 2 * target.denominator)
