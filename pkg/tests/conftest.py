"""Shared fixtures: the reference plans used throughout the suite."""

from fractions import Fraction

import pytest

from core import Backend, MixSplitPlan
from src.dilution import build_plan, parse_target

EPSILONS = (Fraction(3, 100), Fraction(5, 100), Fraction(7, 100))


def within_print(value, printed: float) -> bool:
    """Two-decimal reference values are matched to one unit in the last place."""
    return abs(round(float(value), 2) - printed) <= 0.01 + 1e-6


@pytest.fixture
def plan_87() -> MixSplitPlan:
    return build_plan(parse_target("87/128"))


@pytest.fixture
def plan_41() -> MixSplitPlan:
    return build_plan(parse_target("41/128"))


@pytest.fixture
def plan_17() -> MixSplitPlan:
    return build_plan(parse_target("17/128"))


@pytest.fixture(params=[Backend.FLOAT, Backend.RATIONAL], ids=lambda b: b.value)
def backend(request) -> Backend:
    return request.param
