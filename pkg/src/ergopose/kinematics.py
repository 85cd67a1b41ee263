"""Forward kinematics, geometric Jacobian, and planar inverse kinematics.

All operations are pure functions of a :class:`~ergopose.body_model.KinematicChain`
and a joint-angle vector.  Angles are radians, lengths meters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .body_model import DHParameters, KinematicChain
from .errors import InvalidParameterError

#: Maximum residual for an inverse-kinematics solution to be accepted.
IK_RESIDUAL_TOL_M = 1e-9

ROTATION_ORTHONORMALITY_TOL = 1e-9


@dataclass(frozen=True)
class Posture:
    """Joint-angle vector, one entry per chain joint [rad]."""

    q: np.ndarray

    def __post_init__(self) -> None:
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        if q.ndim != 1:
            raise InvalidParameterError("posture must be a 1-D angle vector")
        if not np.all(np.isfinite(q)):
            raise InvalidParameterError("posture angles must be finite")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    def __len__(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class Pose:
    """Rigid pose of the grasp point: position and rotation in world frame."""

    position: np.ndarray
    rotation: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.position, dtype=float).reshape(3)
        rot = np.asarray(self.rotation, dtype=float)
        if rot.shape != (3, 3):
            raise InvalidParameterError("rotation must be 3x3")
        if not np.allclose(rot @ rot.T, np.eye(3), atol=ROTATION_ORTHONORMALITY_TOL):
            raise InvalidParameterError("rotation is not orthonormal")
        if np.linalg.det(rot) < 0.0:
            raise InvalidParameterError("rotation must be proper (det +1)")
        pos.setflags(write=False)
        rot.setflags(write=False)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "rotation", rot)

    @classmethod
    def from_matrix(cls, transform: np.ndarray) -> "Pose":
        transform = np.asarray(transform, dtype=float)
        return cls(position=transform[:3, 3], rotation=transform[:3, :3])

    def as_matrix(self) -> np.ndarray:
        out = np.eye(4)
        out[:3, :3] = self.rotation
        out[:3, 3] = self.position
        return out


def dh_transform(dh: DHParameters, q: float) -> np.ndarray:
    """Elementary modified-DH transform for joint angle q.

    Composition order: rotate alpha about the previous x axis, translate a
    along it, rotate (q + offset) about the new z axis, translate d along z.
    """
    theta = q + dh.theta_offset
    ca, sa = math.cos(dh.alpha), math.sin(dh.alpha)
    ct, st = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [ct, -st, 0.0, dh.a],
            [ca * st, ca * ct, -sa, -dh.d * sa],
            [sa * st, sa * ct, ca, dh.d * ca],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def _check_posture(chain: KinematicChain, posture: Posture) -> np.ndarray:
    if len(posture) != chain.n_joints:
        raise InvalidParameterError(
            f"posture has {len(posture)} angles, chain has {chain.n_joints} joints"
        )
    return posture.q


def joint_frames(chain: KinematicChain, posture: Posture) -> list[np.ndarray]:
    """World pose of every joint frame (after that joint's own rotation)."""
    q = _check_posture(chain, posture)
    frames = []
    t = np.array(chain.base_frame)
    for joint, angle in zip(chain.joints, q):
        t = t @ dh_transform(joint.dh, angle)
        frames.append(t)
    return frames


def forward_kinematics(chain: KinematicChain, posture: Posture) -> Pose:
    """Pose of the grasp point for the given posture."""
    frames = joint_frames(chain, posture)
    return Pose.from_matrix(frames[-1] @ chain.end_effector_offset)


def jacobian(chain: KinematicChain, posture: Posture) -> np.ndarray:
    """Geometric Jacobian at the grasp point, 6 x n.

    Column i is [z_i x (p - p_i); z_i] for revolute joint i, with p the
    grasp-point position and (p_i, z_i) the joint origin and axis in world
    frame.
    """
    frames = joint_frames(chain, posture)
    grasp = (frames[-1] @ chain.end_effector_offset)[:3, 3]
    cols = []
    for frame in frames:
        axis = frame[:3, 2]
        origin = frame[:3, 3]
        cols.append(np.concatenate([np.cross(axis, grasp - origin), axis]))
    return np.column_stack(cols)


def _planar_lengths(chain: KinematicChain) -> tuple[float, float]:
    """Upper-arm length and effective forearm length (segment + grip offset).

    Assumes the five-joint arm layout from :func:`build_arm_chain`: the
    upper-arm length is carried by the third DH row, the forearm length by
    the fifth, and the grip offset by the tool transform's z translation.
    """
    if chain.n_joints != 5:
        raise InvalidParameterError("planar IK expects the five-joint arm chain")
    l1 = chain.joints[2].dh.d
    l2 = chain.joints[4].dh.d + chain.end_effector_offset[2, 3]
    return l1, l2


def planar_ik(
    chain: KinematicChain,
    target_distance: float,
    target_drop: float = 0.0,
    pinned: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> list[Posture]:
    """Solve the sagittal-plane reach for a point at a horizontal distance
    and vertical drop from the shoulder.

    The out-of-plane joints (q2, q3, q5) are held at ``pinned``.  Returns
    zero, one, or two postures (the two elbow branches); candidates that
    violate joint limits or whose forward-kinematics residual exceeds
    ``IK_RESIDUAL_TOL_M`` are dropped.  An unreachable target yields an
    empty list rather than an error.
    """
    l1, l2 = _planar_lengths(chain)
    u = float(target_distance)  # horizontal, along base +x
    v = float(target_drop)  # downward, along base -z
    r_sq = u * u + v * v

    denom = 2.0 * l1 * l2
    cos_elbow = (r_sq - l1 * l1 - l2 * l2) / denom
    if cos_elbow > 1.0 + 1e-12 or cos_elbow < -1.0 - 1e-12:
        return []
    cos_elbow = min(1.0, max(-1.0, cos_elbow))
    elbow = math.acos(cos_elbow)

    target_world = chain.base_frame @ np.array([u, 0.0, -v, 1.0])
    phi = math.atan2(u, v)

    branches = [elbow] if elbow < 1e-12 else [elbow, -elbow]
    lo = chain.lower_limits
    hi = chain.upper_limits
    solutions: list[Posture] = []
    for e in branches:
        shoulder = phi - math.atan2(l2 * math.sin(e), l1 + l2 * math.cos(e))
        q = np.array([shoulder, pinned[0], pinned[1], e, pinned[2]])
        if np.any(q < lo) or np.any(q > hi):
            continue
        posture = Posture(q)
        residual = np.linalg.norm(
            forward_kinematics(chain, posture).position - target_world[:3]
        )
        if residual < IK_RESIDUAL_TOL_M:
            solutions.append(posture)
    return solutions
