import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ergopose.capacity import (
    CapacityState,
    StrengthModel,
    StrengthSurface,
    default_strength_model,
    fatigue_step,
    max_endurance_time,
    recovery_step,
    simulate_work_rest,
    strength_at,
)
from ergopose.errors import ConfigurationError, InvalidParameterError

from oracles import rk4_integrate


def single_joint_state(maximum=70.0, current=None, k=1.0, r=2.4):
    current = maximum if current is None else current
    return CapacityState(np.array([current]), np.array([maximum]),
                         fatigue_rate_per_min=k, recovery_rate_per_min=r)


class TestStrengthSurface:
    def grid(self):
        return StrengthSurface(
            alpha_s_deg=np.array([0.0, 90.0]),
            alpha_e_deg=np.array([0.0, 60.0]),
            torque_nm=np.array([[50.0, 60.0], [70.0, 80.0]]),
        )

    def test_node_identity(self):
        surface = self.grid()
        assert surface.evaluate(0.0, 0.0) == 50.0
        assert surface.evaluate(90.0, 60.0) == 80.0

    def test_cell_midpoint_is_node_mean(self):
        surface = self.grid()
        assert surface.evaluate(45.0, 30.0) == pytest.approx((50 + 60 + 70 + 80) / 4.0)

    def test_clamps_outside_grid(self):
        surface = self.grid()
        assert surface.evaluate(-30.0, -10.0) == 50.0
        assert surface.evaluate(200.0, 300.0) == 80.0

    def test_empty_table_rejected(self):
        with pytest.raises(ConfigurationError):
            StrengthSurface(np.array([]), np.array([0.0]), np.array([[]]))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ConfigurationError):
            StrengthSurface(np.array([0.0, 1.0]), np.array([0.0]), np.array([[1.0]]))

    def test_nonpositive_values_rejected(self):
        with pytest.raises(ConfigurationError):
            StrengthSurface(np.array([0.0]), np.array([0.0]), np.array([[0.0]]))


class TestStrengthModel:
    def test_population_scale_is_multiplicative(self):
        model = default_strength_model()
        half = StrengthModel(model.surfaces, model.joint_order, population_scale=0.5)
        base = strength_at(model, math.radians(30), math.radians(90))
        scaled = strength_at(half, math.radians(30), math.radians(90))
        assert np.allclose(scaled, 0.5 * base)

    def test_default_elbow_surface_within_published_band(self):
        model = default_strength_model()
        elbow = model.surfaces["elbow_flexion"].torque_nm
        assert np.all(elbow >= 40.0) and np.all(elbow <= 120.0)

    def test_missing_surface_rejected(self):
        model = default_strength_model()
        surfaces = dict(model.surfaces)
        surfaces.pop("elbow_flexion")
        with pytest.raises(ConfigurationError):
            StrengthModel(surfaces, model.joint_order)


class TestFatigueStep:
    def test_zero_load_leaves_state_unchanged(self):
        state = single_joint_state()
        stepped = fatigue_step(state, np.array([0.0]), 1.0)
        assert stepped.current_nm[0] == state.current_nm[0]

    def test_unit_case_analytic_value(self):
        # Exact solution of the decay law: 70 * exp(-1 * 35 * 1 / 70)
        state = single_joint_state(maximum=70.0, k=1.0)
        stepped = fatigue_step(state, np.array([35.0]), 1.0)
        assert stepped.current_nm[0] == pytest.approx(70.0 * math.exp(-0.5), rel=1e-12)
        assert stepped.current_nm[0] == pytest.approx(42.45714618, abs=1e-7)

    def test_two_half_steps_equal_one_full_step(self):
        state = single_joint_state(maximum=70.0)
        load = np.array([22.0])
        full = fatigue_step(state, load, 1.0)
        half = fatigue_step(fatigue_step(state, load, 0.5), load, 0.5)
        assert half.current_nm[0] == pytest.approx(full.current_nm[0], rel=1e-12)

    def test_invalid_dt_rejected(self):
        state = single_joint_state()
        with pytest.raises(InvalidParameterError):
            fatigue_step(state, np.array([10.0]), 0.0)
        with pytest.raises(InvalidParameterError):
            fatigue_step(state, np.array([-1.0]), 1.0)

    def test_strictly_decreasing_but_never_zero(self):
        state = single_joint_state(maximum=50.0)
        load = np.array([40.0])
        previous = state.current_nm[0]
        for _ in range(200):
            state = fatigue_step(state, load, 0.5)
            assert 0.0 < state.current_nm[0] < previous
            previous = state.current_nm[0]

    def test_smaller_maximum_fatigues_faster(self):
        # Same demand and same starting fullness: the weaker joint ends up
        # with the larger normalized load.
        load = np.array([20.0])
        weak = fatigue_step(single_joint_state(maximum=40.0), load, 1.0)
        strong = fatigue_step(single_joint_state(maximum=110.0), load, 1.0)
        assert load[0] / weak.current_nm[0] > load[0] / strong.current_nm[0]

    def test_matches_rk4_oracle(self):
        rng = np.random.default_rng(99)
        maxima = rng.uniform(30.0, 120.0, 20)
        loads = maxima * rng.uniform(0.1, 0.9, 20)
        k = 1.0
        exact = maxima * np.exp(-k * loads * 10.0 / maxima)
        numeric = rk4_integrate(lambda y: -k * (y / maxima) * loads, maxima, 10.0, 1e-3)
        assert np.allclose(numeric, exact, rtol=1e-8)


class TestRecoveryStep:
    def test_full_capacity_is_fixed_point(self):
        state = single_joint_state()
        stepped = recovery_step(state, 2.0)
        assert stepped.current_nm[0] == state.current_nm[0]

    def test_unit_case_analytic_value(self):
        # 100 - 50 * exp(-2.4)
        state = single_joint_state(maximum=100.0, current=50.0, r=2.4)
        stepped = recovery_step(state, 1.0)
        assert stepped.current_nm[0] == pytest.approx(100.0 - 50.0 * math.exp(-2.4), rel=1e-12)
        assert stepped.current_nm[0] == pytest.approx(95.46410233, abs=1e-7)

    def test_monotone_approach_to_maximum(self):
        state = single_joint_state(maximum=80.0, current=20.0)
        previous = state.current_nm[0]
        # strict growth until float convergence; 25 steps stay well short of it
        for _ in range(25):
            state = recovery_step(state, 0.25)
            assert previous < state.current_nm[0] <= 80.0
            previous = state.current_nm[0]
        assert recovery_step(state, 100.0).current_nm[0] == pytest.approx(80.0, rel=1e-9)

    def test_matches_rk4_oracle(self):
        rng = np.random.default_rng(7)
        maxima = rng.uniform(30.0, 120.0, 20)
        start = maxima * rng.uniform(0.2, 0.95, 20)
        r = 2.4
        exact = maxima - (maxima - start) * np.exp(-r * 10.0)
        numeric = rk4_integrate(lambda y: r * (maxima - y), start, 10.0, 1e-3)
        assert np.allclose(numeric, exact, rtol=1e-8)


class TestMaxEnduranceTime:
    def test_half_load_closed_form(self):
        assert max_endurance_time(70.0, 35.0, 1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-12)

    def test_load_at_capacity_gives_zero(self):
        assert max_endurance_time(70.0, 70.0) == 0.0
        assert max_endurance_time(70.0, 80.0) == 0.0

    def test_zero_load_never_exhausts(self):
        assert max_endurance_time(70.0, 0.0) == math.inf
        assert max_endurance_time(70.0, -5.0) == math.inf

    def test_crossing_time_matches_stepped_integration(self):
        gamma_max, load, k = 70.0, 35.0, 1.0
        state = single_joint_state(maximum=gamma_max, k=k)
        dt = 1e-4
        t = 0.0
        while state.current_nm[0] > load:
            state = fatigue_step(state, np.array([load]), dt)
            t += dt
        expected = max_endurance_time(gamma_max, load, k)
        assert abs(t - expected) <= dt + 1e-12

    @settings(max_examples=60, deadline=None)
    @given(
        gamma_max=st.floats(min_value=30.0, max_value=120.0),
        frac_a=st.floats(min_value=0.1, max_value=0.85),
        delta=st.floats(min_value=0.01, max_value=0.1),
    )
    def test_monotonicity_properties(self, gamma_max, frac_a, delta):
        load_small = frac_a * gamma_max
        load_big = (frac_a + delta) * gamma_max
        assert max_endurance_time(gamma_max, load_big) < max_endurance_time(gamma_max, load_small)
        assert max_endurance_time(gamma_max * (1 + delta), load_small) > max_endurance_time(
            gamma_max, load_small
        )


class TestSimulateWorkRest:
    def test_pure_recovery_when_no_work(self):
        state = single_joint_state(maximum=90.0, current=45.0)
        series = simulate_work_rest(state, np.array([30.0]), 0.0, 1.0, cycles=3)
        values = series.capacity_nm[:, 0]
        assert np.all(np.diff(values) >= 0.0)

    def test_one_cycle_closed_form_composition(self):
        # Work then rest, both exact: 70 - (70 - 70 e^{-0.25}) e^{-2.4}
        state = single_joint_state(maximum=70.0, k=1.0, r=2.4)
        series = simulate_work_rest(state, np.array([35.0]), 0.5, 1.0, cycles=1)
        expected = 70.0 - (70.0 - 70.0 * math.exp(-0.25)) * math.exp(-2.4)
        assert series.final_state.current_nm[0] == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(68.59534, abs=1e-4)

    def test_cycle_end_capacity_strictly_decreasing(self):
        state = single_joint_state(maximum=70.0)
        series = simulate_work_rest(state, np.array([20.0]), 0.5, 1.0, cycles=8)
        ends = series.capacity_nm[list(series.cycle_end_indices), 0]
        assert np.all(np.diff(ends) < 0.0)

    def test_no_rest_equals_continuous_fatigue(self):
        state = single_joint_state(maximum=70.0)
        load = np.array([25.0])
        series = simulate_work_rest(state, load, 0.5, 0.0, cycles=4)
        direct = fatigue_step(state, load, 2.0)
        assert series.final_state.current_nm[0] == pytest.approx(
            direct.current_nm[0], rel=1e-12
        )

    def test_sampling_resolution_is_cosmetic(self):
        state = single_joint_state(maximum=70.0)
        load = np.array([25.0])
        coarse = simulate_work_rest(state, load, 0.5, 1.0, cycles=2, sample_dt_min=0.5)
        fine = simulate_work_rest(state, load, 0.5, 1.0, cycles=2, sample_dt_min=1e-3)
        assert coarse.final_state.current_nm[0] == pytest.approx(
            fine.final_state.current_nm[0], rel=1e-12
        )

    def test_invalid_arguments_rejected(self):
        state = single_joint_state()
        with pytest.raises(InvalidParameterError):
            simulate_work_rest(state, np.array([10.0]), -1.0, 1.0, cycles=1)
        with pytest.raises(InvalidParameterError):
            simulate_work_rest(state, np.array([10.0]), 1.0, 1.0, cycles=0)


class TestCapacityState:
    def test_current_capped_by_maximum(self):
        with pytest.raises(InvalidParameterError):
            CapacityState(np.array([80.0]), np.array([70.0]))
        with pytest.raises(InvalidParameterError):
            CapacityState(np.array([0.0]), np.array([70.0]))

    def test_rates_positive(self):
        with pytest.raises(InvalidParameterError):
            CapacityState(np.array([50.0]), np.array([70.0]), fatigue_rate_per_min=0.0)
