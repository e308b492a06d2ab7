from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from core import (
    ApproximationError,
    Backend,
    DilutionError,
    MixSplitPlan,
    Reagent,
    TargetCF,
    TargetFormatError,
)
from src.dilution import (
    approximate_cf,
    build_plan,
    complement_plan,
    droplet_budget,
    ideal_simulate,
    intermediate_cfs,
    parse_target,
)

S, B = Reagent.SAMPLE, Reagent.BUFFER


class TestParseTarget:
    @pytest.mark.parametrize("text", ["87/128", "87 / 128", "87/2^7", "0.68"])
    def test_forms(self, text):
        target = parse_target(text, accuracy=7)
        assert (target.numerator, target.accuracy) == (87, 7)

    def test_even_numerator_is_reduced(self):
        target = parse_target("64/128")
        assert (target.numerator, target.accuracy) == (1, 1)

    def test_decimal_tie_goes_to_odd(self):
        # 0.625 * 4 = 2.5 sits halfway between 2 and 3
        assert parse_target("0.625", accuracy=2).numerator == 3

    @pytest.mark.parametrize("text", ["87/129", "3/12", "abc", "1/0", "0/128", "128/128", "200/128"])
    def test_rejected(self, text):
        with pytest.raises(TargetFormatError):
            parse_target(text)

    def test_decimal_needs_accuracy(self):
        with pytest.raises(TargetFormatError, match="accuracy"):
            parse_target("0.68")

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            parse_target("87/129")
        assert issubclass(TargetFormatError, DilutionError)


class TestApproximate:
    def test_smallest_accuracy(self):
        target = approximate_cf(0.68, 0.005)
        assert str(target) == "87/128"

    def test_exact_dyadic(self):
        assert str(approximate_cf("0.75", "1e-9")) == "3/4"

    def test_accuracy_cap(self):
        with pytest.raises(ApproximationError):
            approximate_cf(Fraction(1, 3), Fraction(1, 10**12), max_accuracy=10)

    @pytest.mark.parametrize("value,tolerance", [(0.0, 0.1), (1.0, 0.1), (0.5, 0)])
    def test_bad_inputs(self, value, tolerance):
        with pytest.raises(ValueError):
            approximate_cf(value, tolerance)

    @given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)))
    def test_within_tolerance(self, value):
        target = approximate_cf(value, Fraction(1, 1000))
        assert abs(target.fraction - value) <= Fraction(1, 1000)

    @pytest.mark.parametrize("value,expected", [
        (Fraction(1, 1000), "1/128"),
        (Fraction(999, 1000), "127/128"),
    ])
    def test_values_near_the_ends(self, value, expected):
        assert str(approximate_cf(value, Fraction(1, 100))) == expected

    @settings(deadline=None)
    @given(
        st.fractions(min_value=Fraction(1, 10000), max_value=Fraction(9999, 10000)),
        st.fractions(min_value=Fraction(1, 5000), max_value=Fraction(1, 10)),
    )
    def test_accuracy_is_minimal(self, value, tolerance):
        target = approximate_cf(value, tolerance)
        for n in range(1, target.accuracy):
            assert all(abs(Fraction(x, 1 << n) - value) > tolerance for x in range(1, 1 << n))


class TestBuildPlan:
    def test_87_over_128(self, plan_87):
        assert plan_87.reagents == (S, S, B, S, B, S)
        assert plan_87.first_op == (S, B)
        assert plan_87.reagent(6) is S

    def test_half_needs_one_operation(self):
        plan = build_plan(TargetCF(numerator=1, accuracy=1))
        assert plan.reagents == ()
        assert ideal_simulate(plan).concentration == 0.5

    @pytest.mark.parametrize("n", range(1, 11))
    def test_every_target_is_realized_exactly(self, n):
        for x in range(1, 1 << n, 2):
            plan = build_plan(TargetCF(numerator=x, accuracy=n))
            state = ideal_simulate(plan, Backend.RATIONAL)
            assert state.concentration == Fraction(x, 1 << n)
            assert state.volume == 1

    def test_schedule_is_validated(self, plan_87):
        with pytest.raises(ValidationError):
            MixSplitPlan(target=plan_87.target, reagents=(S, S, S, S, B, S))
        with pytest.raises(ValidationError):
            MixSplitPlan(target=plan_87.target, reagents=(S, S, B))

    def test_intermediate_cfs(self, plan_87):
        values = intermediate_cfs(plan_87, Backend.RATIONAL)
        assert values[0] == Fraction(1, 2)
        assert values[1] == Fraction(3, 4)
        assert values[-1] == Fraction(87, 128)
        assert len(values) == 7


class TestComplement:
    def test_plan_swaps_reagents(self, plan_87, plan_41):
        assert complement_plan(plan_87) == plan_41

    def test_target(self):
        assert str(parse_target("87/128").complement()) == "41/128"


class TestDropletBudget:
    def test_17_over_128(self, plan_17):
        budget = droplet_budget(plan_17)
        assert (budget.sample, budget.buffer, budget.waste, budget.target) == (2, 6, 6, 2)
        assert budget.dispensed == 8

    @given(st.integers(min_value=1, max_value=12).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(min_value=0, max_value=(1 << (n - 1)) - 1))))
    def test_counts_balance(self, case):
        n, k = case
        budget = droplet_budget(build_plan(TargetCF(numerator=2 * k + 1, accuracy=n)))
        assert budget.dispensed == n + 1
        assert budget.dispensed == budget.waste + budget.target
