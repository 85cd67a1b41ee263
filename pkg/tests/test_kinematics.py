import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ergopose.body_model import ArmConfig, JointOverride, build_arm_chain
from ergopose.errors import InvalidParameterError
from ergopose.kinematics import (
    Posture,
    Pose,
    forward_kinematics,
    jacobian,
    planar_ik,
)

from oracles import planar_grasp_position


def random_postures(chain, n, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(chain.lower_limits, chain.upper_limits, size=(n, chain.n_joints))


class TestPostureAndPose:
    def test_posture_rejects_nonfinite(self):
        with pytest.raises(InvalidParameterError):
            Posture(np.array([0.0, np.nan]))

    def test_pose_rejects_skewed_rotation(self):
        bad = np.eye(3)
        bad[0, 1] = 1e-3
        with pytest.raises(InvalidParameterError):
            Pose(position=np.zeros(3), rotation=bad)

    def test_wrong_length_posture_rejected(self, chain):
        with pytest.raises(InvalidParameterError):
            forward_kinematics(chain, Posture(np.zeros(3)))


class TestForwardKinematics:
    def test_planar_posture_matches_trig_oracle(self, chain, segments):
        l1 = segments.upper_arm.length_m
        l2 = segments.forearm.length_m + 0.10
        for a_s_deg, a_e_deg in [(30, 90), (0, 0), (90, 0), (45, 45), (10, 120)]:
            a_s, a_e = math.radians(a_s_deg), math.radians(a_e_deg)
            pose = forward_kinematics(chain, Posture([a_s, 0, 0, a_e, 0]))
            expected = planar_grasp_position(l1, l2, a_s, a_e)
            assert np.allclose(pose.position, expected, atol=1e-12)

    def test_position_bounded_by_total_reach(self, chain, segments):
        reach = segments.upper_arm.length_m + segments.forearm.length_m + 0.10
        for q in random_postures(chain, 50, seed=7):
            pose = forward_kinematics(chain, Posture(q))
            assert np.linalg.norm(pose.position) <= reach + 1e-9

    def test_rotation_stays_orthonormal(self, chain):
        for q in random_postures(chain, 100, seed=11):
            pose = forward_kinematics(chain, Posture(q))
            assert np.allclose(pose.rotation @ pose.rotation.T, np.eye(3), atol=1e-9)
            assert np.linalg.det(pose.rotation) == pytest.approx(1.0, abs=1e-9)


class TestJacobian:
    def test_matches_central_differences(self, chain):
        for q in random_postures(chain, 100, seed=3):
            jac = jacobian(chain, Posture(q))[:3]
            for i in range(chain.n_joints):
                def position_of(angle, i=i, q=q):
                    qq = q.copy()
                    qq[i] = angle
                    return forward_kinematics(chain, Posture(qq)).position

                eps = 1e-6
                fd_col = (position_of(q[i] + eps) - position_of(q[i] - eps)) / (2 * eps)
                assert np.allclose(jac[:, i], fd_col, atol=1e-6)

    def test_straight_arm_is_singular(self, chain):
        jac = jacobian(chain, Posture(np.zeros(5)))
        singular_values = np.linalg.svd(jac, compute_uv=False)
        assert np.sum(singular_values > 1e-9) < 5

    def test_reference_pose_columns_are_lever_arms(self, chain, segments):
        # At q = 0 the arm points straight down: joint axes are
        # z1 = z4 = -y, z2 = -x, z3 = z5 = -z, and the grasp point sits
        # reach (resp. forearm + grip) below the flexion joints.
        h_u = segments.upper_arm.length_m
        l_f = segments.forearm.length_m + 0.10
        reach = h_u + l_f
        jac = jacobian(chain, Posture(np.zeros(5)))
        expected = np.zeros((6, 5))
        expected[:, 0] = [reach, 0, 0, 0, -1, 0]
        expected[:, 1] = [0, -reach, 0, -1, 0, 0]
        expected[:, 2] = [0, 0, 0, 0, 0, -1]
        expected[:, 3] = [l_f, 0, 0, 0, -1, 0]
        expected[:, 4] = [0, 0, 0, 0, 0, -1]
        assert np.allclose(jac, expected, atol=1e-12)


class TestPlanarIK:
    def test_full_extension_boundary_single_solution(self, chain, segments):
        reach = segments.upper_arm.length_m + segments.forearm.length_m + 0.10
        solutions = planar_ik(chain, reach, 0.0)
        assert len(solutions) == 1
        # arccos conditioning at the boundary leaves ~1e-8 rad of elbow angle
        assert solutions[0].q[3] == pytest.approx(0.0, abs=1e-6)

    def test_unreachable_target_empty(self, chain):
        assert planar_ik(chain, 10.0, 0.0) == []

    def test_inside_minimum_reach_empty(self, chain):
        assert planar_ik(chain, 0.01, 0.0) == []

    def test_default_limits_drop_hyperextension_branch(self, chain):
        # The mirror branch needs negative elbow flexion, which the default
        # elbow range excludes.
        solutions = planar_ik(chain, 0.5, 0.0)
        assert len(solutions) == 1
        assert solutions[0].q[3] > 0.0

    def test_two_mirror_branches_with_widened_elbow(self, body):
        config = ArmConfig(joint_overrides={
            "elbow_flexion": JointOverride(limits_deg=(-145.0, 145.0))})
        wide_chain = build_arm_chain(body, config)
        solutions = planar_ik(wide_chain, 0.5, 0.0)
        assert len(solutions) == 2
        elbows = sorted(s.q[3] for s in solutions)
        assert elbows[0] == pytest.approx(-elbows[1])
        for s in solutions:
            pose = forward_kinematics(wide_chain, s)
            assert np.linalg.norm(pose.position - [0.5, 0.0, 0.0]) < 1e-9

    def test_round_trip_with_drop(self, chain):
        for d, drop in [(0.45, 0.1), (0.5, -0.05), (0.6, 0.2), (0.42, 0.0)]:
            for posture in planar_ik(chain, d, drop):
                pose = forward_kinematics(chain, posture)
                assert np.linalg.norm(pose.position - [d, 0.0, -drop]) < 1e-9

    @settings(max_examples=50, deadline=None)
    @given(
        d=st.floats(min_value=0.2, max_value=0.68),
        drop=st.floats(min_value=-0.3, max_value=0.3),
    )
    def test_round_trip_property(self, chain, d, drop):
        for posture in planar_ik(chain, d, drop):
            pose = forward_kinematics(chain, posture)
            assert np.linalg.norm(pose.position - [d, 0.0, -drop]) < 1e-9
