import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ergopose.capacity import CapacityState
from ergopose.errors import InvalidParameterError, InvalidStateError
from ergopose.kinematics import Posture
from ergopose.objectives import (
    DiscomfortParams,
    FatigueMeasureParams,
    PENALTY_RATIO_CAP,
    discomfort_measure,
    fatigue_measure,
    limit_penalties,
)


def capacity_of(values):
    arr = np.asarray(values, dtype=float)
    return CapacityState(arr, arr)


def single_joint_params(lower=-math.pi / 2, upper=math.pi / 2, neutral=0.0, gamma=1.0):
    return DiscomfortParams(
        q_upper=np.array([upper]),
        q_lower=np.array([lower]),
        q_neutral=np.array([neutral]),
        weights=np.array([gamma]),
    )


class TestFatigueMeasure:
    def test_zero_torques(self):
        assert fatigue_measure(np.zeros(3), capacity_of([40, 50, 60])) == 0.0

    def test_full_utilization_is_one_for_any_exponent(self):
        for p in (0.5, 1.0, 2.0, 3.7):
            value = fatigue_measure(
                np.array([55.0]), capacity_of([55.0]), FatigueMeasureParams(p)
            )
            assert value == pytest.approx(1.0, rel=1e-12)

    def test_quadratic_example(self):
        value = fatigue_measure(np.array([20.0, 10.0]), capacity_of([40.0, 40.0]))
        assert value == pytest.approx(0.3125, rel=1e-12)

    def test_capacity_reduction_raises_measure(self):
        fresh = fatigue_measure(np.array([20.0, 10.0]), capacity_of([40.0, 40.0]))
        tired = fatigue_measure(np.array([20.0, 10.0]), capacity_of([30.0, 30.0]))
        assert tired == pytest.approx(4.0 / 9.0 + 1.0 / 9.0, rel=1e-10)
        assert tired > fresh

    def test_sign_invariance(self):
        cap = capacity_of([40.0, 40.0])
        assert fatigue_measure(np.array([20.0, -10.0]), cap) == fatigue_measure(
            np.array([20.0, 10.0]), cap
        )

    def test_nonpositive_capacity_rejected(self):
        state = capacity_of([40.0])
        object.__setattr__(state, "current_nm", np.array([-1.0]))
        with pytest.raises(InvalidStateError):
            fatigue_measure(np.array([10.0]), state)

    @settings(max_examples=50, deadline=None)
    @given(
        torque=st.floats(min_value=1.0, max_value=50.0),
        bump=st.floats(min_value=0.1, max_value=10.0),
    )
    def test_monotone_in_torque_and_capacity(self, torque, bump):
        cap = capacity_of([60.0])
        low = fatigue_measure(np.array([torque]), cap)
        high = fatigue_measure(np.array([torque + bump]), cap)
        assert high > low
        weaker = capacity_of([60.0 - bump])
        assert fatigue_measure(np.array([torque]), weaker) > low

    def test_permutation_symmetry(self):
        torques = np.array([12.0, 30.0, 5.0])
        caps = np.array([40.0, 70.0, 20.0])
        perm = [2, 0, 1]
        assert fatigue_measure(torques, capacity_of(caps)) == pytest.approx(
            fatigue_measure(torques[perm], capacity_of(caps[perm])), rel=1e-12
        )


class TestLimitPenalties:
    def test_at_upper_limit(self):
        qu, ql = limit_penalties(1.0, 1.0, -1.0)
        assert qu == pytest.approx(1.5**100, rel=1e-12)

    def test_at_lower_limit(self):
        qu, ql = limit_penalties(-1.0, 1.0, -1.0)
        assert ql == pytest.approx(1.5**100, rel=1e-12)
        # The opposite-limit term is held at the base minimum (ratio cap)
        assert qu == pytest.approx(0.5**100, rel=1e-9)

    def test_midrange_negligible(self):
        qu, ql = limit_penalties(0.0, 1.0, -1.0)
        assert qu < 1e-20 and ql < 1e-20
        assert qu == pytest.approx((0.5 * math.cos(2.5) + 1.0) ** 100, rel=1e-9)

    def test_monotone_decreasing_away_from_limit(self):
        ratios = np.linspace(0.0, PENALTY_RATIO_CAP, 500)
        span = 2.0
        q = 1.0 - ratios * span
        qu, _ = limit_penalties(q, 1.0, -1.0)
        assert np.all(np.diff(qu) < 0.0)

    def test_held_constant_beyond_cap(self):
        qu_far, _ = limit_penalties(-0.9, 1.0, -1.0)
        qu_cap, _ = limit_penalties(1.0 - PENALTY_RATIO_CAP * 2.0, 1.0, -1.0)
        assert qu_far == pytest.approx(qu_cap, rel=1e-12)

    def test_degenerate_limits_rejected(self):
        with pytest.raises(InvalidParameterError):
            limit_penalties(0.0, 1.0, 1.0)


class TestDiscomfortMeasure:
    def test_neutral_midrange_nearly_zero(self):
        params = single_joint_params()
        value = discomfort_measure(Posture([0.0]), params)
        assert value < 1e-19

    def test_upper_limit_dominated_by_penalty(self):
        params = single_joint_params()
        value = discomfort_measure(Posture([math.pi / 2]), params)
        assert value >= 1e17

    def test_doubling_gamma_scales_displacement_term_only(self):
        base = single_joint_params(gamma=1.0)
        double = single_joint_params(gamma=2.0)
        q = Posture([0.3])
        qu, ql = limit_penalties(0.3, math.pi / 2, -math.pi / 2)
        penalties = float(qu + ql)
        d1 = discomfort_measure(q, base) - penalties
        d2 = discomfort_measure(q, double) - penalties
        assert d2 == pytest.approx(2.0 * d1, rel=1e-9)

    def test_strictly_increasing_from_neutral_on_grid(self):
        params = single_joint_params()
        grid = np.arange(0.0, math.pi / 2 + 1e-12, 1e-3)
        values = [discomfort_measure(Posture([q]), params) for q in grid]
        assert np.all(np.diff(values) > 0.0)
        down = [discomfort_measure(Posture([-q]), params) for q in grid]
        assert np.all(np.diff(down) > 0.0)

    def test_permutation_symmetry(self):
        params = DiscomfortParams(
            q_upper=np.array([1.0, 2.0]),
            q_lower=np.array([-1.0, -0.5]),
            q_neutral=np.array([0.0, 0.75]),
            weights=np.array([1.0, 3.0]),
        )
        swapped = DiscomfortParams(
            q_upper=params.q_upper[::-1].copy(),
            q_lower=params.q_lower[::-1].copy(),
            q_neutral=params.q_neutral[::-1].copy(),
            weights=params.weights[::-1].copy(),
        )
        q = np.array([0.4, 1.1])
        assert discomfort_measure(Posture(q), params) == pytest.approx(
            discomfort_measure(Posture(q[::-1]), swapped), rel=1e-12
        )

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidParameterError):
            discomfort_measure(Posture([0.0, 0.0]), single_joint_params())
