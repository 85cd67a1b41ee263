"""Static inverse dynamics: joint torques from gravity and a hand load.

With zero joint velocity and acceleration the equilibrium reduces to the
gravity term plus the contribution of the external wrench at the grasp
point.  Torques follow the actuator convention: a positive value is the
torque the joint must supply to hold the posture against the applied loads,
so the magnitudes are the demand that drives capacity decay and the
strength constraint.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .body_model import KinematicChain, SegmentSet
from .errors import InvalidParameterError
from .kinematics import Posture, jacobian, joint_frames

STANDARD_GRAVITY = 9.81

#: Chain link index (0-based) carrying each segment; a joint feels a
#: segment's weight only if the segment sits at or beyond its own link.
UPPER_ARM_LINK = 2
FOREARM_LINK = 4


@dataclass(frozen=True)
class ExternalWrench:
    """Force and moment applied to the hand at the grasp point, world frame."""

    force: np.ndarray
    moment: np.ndarray

    def __post_init__(self) -> None:
        force = np.asarray(self.force, dtype=float).reshape(3)
        moment = np.asarray(self.moment, dtype=float).reshape(3)
        if not (np.all(np.isfinite(force)) and np.all(np.isfinite(moment))):
            raise InvalidParameterError("wrench components must be finite")
        force.setflags(write=False)
        moment.setflags(write=False)
        object.__setattr__(self, "force", force)
        object.__setattr__(self, "moment", moment)

    @classmethod
    def zero(cls) -> "ExternalWrench":
        return cls(np.zeros(3), np.zeros(3))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.force, self.moment])


def segment_com_positions(
    chain: KinematicChain, segments: SegmentSet, posture: Posture
) -> dict[str, np.ndarray]:
    """World positions of the segment mass centers.

    Each center lies on its segment axis (the z axis of the carrying link's
    frame) at the configured offset from the proximal joint.
    """
    frames = joint_frames(chain, posture)
    shoulder = np.asarray(chain.base_frame, float)[:3, 3]
    upper_axis = frames[UPPER_ARM_LINK][:3, 2]
    elbow = frames[UPPER_ARM_LINK][:3, 3]
    forearm_axis = frames[FOREARM_LINK][:3, 2]
    return {
        "upper_arm": shoulder + segments.upper_arm.com_offset_m * upper_axis,
        "forearm": elbow + segments.forearm.com_offset_m * forearm_axis,
    }


def potential_energy(
    chain: KinematicChain,
    segments: SegmentSet,
    posture: Posture,
    g: float = STANDARD_GRAVITY,
) -> float:
    """Total gravitational potential of the segments (world z up)."""
    coms = segment_com_positions(chain, segments, posture)
    return g * (
        segments.upper_arm.mass_kg * coms["upper_arm"][2]
        + segments.forearm.mass_kg * coms["forearm"][2]
    )


def gravity_torques(
    chain: KinematicChain,
    segments: SegmentSet,
    posture: Posture,
    g: float = STANDARD_GRAVITY,
) -> np.ndarray:
    """Actuator torques holding the segments against gravity.

    Computed by backward accumulation of segment weights through the chain;
    the result equals the gradient of the potential energy with respect to
    the joint angles.
    """
    frames = joint_frames(chain, posture)
    coms = segment_com_positions(chain, segments, posture)
    segment_at_link = {
        UPPER_ARM_LINK: (coms["upper_arm"], segments.upper_arm.mass_kg),
        FOREARM_LINK: (coms["forearm"], segments.forearm.mass_kg),
    }

    torques = np.zeros(chain.n_joints)
    force_acc = np.zeros(3)
    moment_acc = np.zeros(3)
    origin_next = frames[-1][:3, 3]
    for i in range(chain.n_joints - 1, -1, -1):
        origin = frames[i][:3, 3]
        moment_acc += np.cross(origin_next - origin, force_acc)
        if i in segment_at_link:
            com, mass = segment_at_link[i]
            weight = np.array([0.0, 0.0, -mass * g])
            moment_acc += np.cross(com - origin, weight)
            force_acc += weight
        torques[i] = -frames[i][:3, 2] @ moment_acc
        origin_next = origin
    return torques


def load_torques(
    chain: KinematicChain, posture: Posture, wrench: ExternalWrench
) -> np.ndarray:
    """Actuator torques balancing an external wrench applied to the hand.

    The mapping is the transpose of the grasp-point Jacobian applied to the
    reaction of the given wrench, so a load that pulls the arm down demands
    a positive torque at the joints that hold it up.  Linear in the wrench.
    """
    return -(jacobian(chain, posture).T @ wrench.as_vector())


def static_joint_torques(
    chain: KinematicChain,
    segments: SegmentSet,
    posture: Posture,
    wrench: ExternalWrench,
    g: float = STANDARD_GRAVITY,
) -> np.ndarray:
    """Total static torque demand: gravity plus external-load torques."""
    return gravity_torques(chain, segments, posture, g) + load_torques(
        chain, posture, wrench
    )
