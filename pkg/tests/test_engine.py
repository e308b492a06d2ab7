from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import (
    Backend,
    DropletState,
    ErrorVector,
    Reagent,
    SplitDisposition,
    TargetCF,
    VectorLengthError,
)
from src.dilution import build_plan, droplet_budget, ideal_simulate
from src.engine import (
    final_mass,
    mix_op,
    recurrence_eval,
    simulate,
    split_op,
    trace_records,
    waste_mass,
)

from .conftest import EPSILONS, within_print

PLUS, MINUS, SKIP = SplitDisposition.PLUS, SplitDisposition.MINUS, SplitDisposition.SKIP
SYMBOLS = (SKIP, PLUS, MINUS)


@st.composite
def plans(draw, max_accuracy=8):
    n = draw(st.integers(min_value=1, max_value=max_accuracy))
    x = 2 * draw(st.integers(min_value=0, max_value=(1 << (n - 1)) - 1)) + 1
    return build_plan(TargetCF(numerator=x, accuracy=n))


@st.composite
def plans_and_vectors(draw, max_accuracy=8):
    plan = draw(plans(max_accuracy))
    entries = draw(st.lists(st.sampled_from(SYMBOLS), min_size=plan.accuracy - 1, max_size=plan.accuracy - 1))
    epsilon = draw(st.fractions(min_value=0, max_value=Fraction(99, 100), max_denominator=1000))
    return plan, ErrorVector(entries=tuple(entries), epsilon=epsilon)


class TestPrimitives:
    def test_mix_with_sample(self):
        mixed = mix_op(DropletState(concentration=0.4375, volume=1.07), Reagent.SAMPLE)
        assert mixed.volume == pytest.approx(2.07)
        assert mixed.concentration == pytest.approx(1.468125 / 2.07, abs=1e-12)

    def test_mix_conserves_mass_exactly(self):
        carried = DropletState(concentration=Fraction(7, 16), volume=Fraction(107, 100))
        for reagent in Reagent:
            mixed = mix_op(carried, reagent)
            assert mixed.mass == carried.mass + reagent.cf_value

    @pytest.mark.parametrize("disposition,kept,discarded", [
        (PLUS, Fraction(107, 100), Fraction(93, 100)),
        (MINUS, Fraction(93, 100), Fraction(107, 100)),
        (SKIP, Fraction(1), Fraction(1)),
    ])
    def test_split_volumes(self, disposition, kept, discarded):
        parent = DropletState(concentration=Fraction(1, 2), volume=Fraction(2))
        a, b = split_op(parent, disposition, Fraction(7, 100))
        assert (a.volume, b.volume) == (kept, discarded)
        assert a.concentration == b.concentration == parent.concentration

    @pytest.mark.parametrize("epsilon", [-0.01, 1.0, 1.5])
    def test_split_rejects_magnitude(self, epsilon):
        with pytest.raises(ValueError):
            split_op(DropletState(concentration=0.5, volume=2.0), PLUS, epsilon)

    def test_droplet_invariants(self):
        with pytest.raises(ValueError):
            DropletState(concentration=1.2, volume=1.0)
        with pytest.raises(ValueError):
            DropletState(concentration=0.5, volume=0.0)


class TestSimulate:
    def test_error_free(self, plan_87, backend):
        result = simulate(plan_87, ErrorVector.uniform(6, SKIP, 0.07), backend=backend)
        assert result.produced_cf * 128 == 87
        assert result.cf_error == 0
        assert result.final_volume == 1
        assert len(result.trace) == 7

    def test_single_error_final_volume(self, plan_87):
        vector = ErrorVector.parse("000+00", Fraction(7, 100))
        result = simulate(plan_87, vector, backend=Backend.RATIONAL)
        assert result.final_volume == Fraction(807, 800)
        assert float(result.final_volume) == pytest.approx(1.00875)

    def test_wrong_length(self, plan_87):
        with pytest.raises(VectorLengthError):
            simulate(plan_87, ErrorVector.parse("+++", 0.07))
        with pytest.raises(VectorLengthError):
            recurrence_eval(plan_87, ErrorVector.parse("+++++++", 0.07))

    def test_step_epsilons_override(self, plan_87):
        uniform = simulate(plan_87, ErrorVector.single(6, 4, PLUS, Fraction(7, 100)), backend=Backend.RATIONAL)
        per_step = ErrorVector(entries=(PLUS,) * 6, step_epsilons=(0, 0, 0, Fraction(7, 100), 0, 0))
        assert simulate(plan_87, per_step, backend=Backend.RATIONAL).produced_cf == uniform.produced_cf

    def test_trace_records(self, plan_87):
        records = trace_records(simulate(plan_87, ErrorVector.parse("000+00", 0.07)))
        assert [r["op"] for r in records] == list(range(1, 8))
        assert set(records[0]) == {"op", "cf", "total_volume", "kept_volume", "disposition"}
        assert records[3]["disposition"] == "+"
        assert records[3]["kept_volume"] == pytest.approx(1.07)
        assert records[0]["cf"] == 0.5

    def test_float_and_rational_agree(self, plan_87):
        vector = ErrorVector.parse("-+0-+-", 0.07)
        fast = simulate(plan_87, vector)
        exact = simulate(plan_87, vector, backend=Backend.RATIONAL)
        assert abs(fast.produced_cf - float(exact.produced_cf)) <= 1e-12
        assert isinstance(exact.produced_cf, Fraction)


class TestRecurrence:
    def test_error_free(self, plan_87):
        cf, volume = recurrence_eval(plan_87, ErrorVector.uniform(6, SKIP, 0.07), Backend.RATIONAL)
        assert (cf, volume) == (Fraction(87, 128), 1)

    def test_table_row(self, plan_87):
        cf, _ = recurrence_eval(plan_87, ErrorVector.parse("-0+00-", 0.07))
        assert within_print(cf * 128, 88.61)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_engine_exhaustively(self, n):
        for x in range(1, 1 << n, 2):
            plan = build_plan(TargetCF(numerator=x, accuracy=n))
            for entries in product(SYMBOLS, repeat=n - 1):
                for epsilon in EPSILONS:
                    vector = ErrorVector(entries=entries, epsilon=float(epsilon))
                    result = simulate(plan, vector, record_trace=False)
                    cf, volume = recurrence_eval(plan, vector)
                    assert abs(result.produced_cf - cf) <= 1e-12
                    assert abs(result.final_volume - volume) <= 1e-12

    @pytest.mark.parametrize("n", [7, 8])
    def test_matches_engine_on_random_vectors(self, n):
        rng = np.random.default_rng(20 + n)
        for _ in range(10_000):
            x = 2 * int(rng.integers(0, 1 << (n - 1))) + 1
            plan = build_plan(TargetCF(numerator=x, accuracy=n))
            entries = tuple(SYMBOLS[i] for i in rng.integers(0, 3, size=n - 1))
            vector = ErrorVector(entries=entries, epsilon=float(EPSILONS[int(rng.integers(0, 3))]))
            result = simulate(plan, vector, record_trace=False)
            cf, volume = recurrence_eval(plan, vector)
            assert abs(result.produced_cf - cf) <= 1e-12
            assert abs(result.final_volume - volume) <= 1e-12


class TestConservation:
    @settings(max_examples=200, deadline=None)
    @given(plans_and_vectors())
    def test_every_operation(self, case):
        plan, vector = case
        result = simulate(plan, vector, backend=Backend.RATIONAL)
        for step in result.trace:
            assert step.kept.volume + step.discarded.volume == step.post_mix.volume
            assert step.kept.concentration == step.discarded.concentration == step.post_mix.concentration
            reagent = Reagent.BUFFER if step.op_index == 1 else plan.reagent(step.op_index - 1)
            assert step.post_mix.mass == step.pre_mix.mass + reagent.cf_value

    @settings(max_examples=200, deadline=None)
    @given(plans_and_vectors())
    def test_global_sample_mass(self, case):
        plan, vector = case
        result = simulate(plan, vector, backend=Backend.RATIONAL)
        assert final_mass(result) + waste_mass(result) == droplet_budget(plan).sample

    @settings(max_examples=200, deadline=None)
    @given(plans_and_vectors())
    def test_float_mass_within_rounding(self, case):
        plan, vector = case
        result = simulate(plan, vector)
        assert abs(final_mass(result) + waste_mass(result) - droplet_budget(plan).sample) <= 1e-12


class TestFinalSplit:
    @settings(max_examples=200, deadline=None)
    @given(plans_and_vectors(), st.sampled_from([PLUS, MINUS]))
    def test_changes_volume_only(self, case, final):
        plan, vector = case
        plain = simulate(plan, vector)
        shifted = simulate(plan, vector, final_split=final)
        assert shifted.produced_cf == plain.produced_cf
        if vector.epsilon > 0:
            assert shifted.final_volume != plain.final_volume


class TestZeroEpsilon:
    @settings(deadline=None)
    @given(plans_and_vectors())
    def test_matches_ideal(self, case):
        plan, vector = case
        zero = ErrorVector(entries=vector.entries, epsilon=0)
        result = simulate(plan, zero, backend=Backend.RATIONAL)
        ideal = ideal_simulate(plan, Backend.RATIONAL)
        assert (result.produced_cf, result.final_volume) == (ideal.concentration, ideal.volume)
