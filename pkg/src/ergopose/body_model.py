"""Articulated-body description of the arm and its dynamic parameters.

The limb is a serial chain of revolute joints in modified Denavit-Hartenberg
(Khalil-Kleinfinger) convention.  Segment lengths, radii, masses, and
inertias are derived from stature and body mass with standard anthropometric
regressions, treating each segment as a uniform-density cylinder.  The
forearm segment includes the hand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidParameterError

# Anthropometric regression coefficients.  Lengths and radii scale with
# stature H, masses with body mass M.
FOREARM_LENGTH_FRACTION = 0.146
FOREARM_RADIUS_FRACTION = 0.125
UPPER_ARM_LENGTH_FRACTION = 0.186
UPPER_ARM_RADIUS_FRACTION = 0.125
ARM_MASS_FRACTION = 0.051
FOREARM_MASS_SHARE = 0.451
UPPER_ARM_MASS_SHARE = 0.549

#: Default distance from the wrist end of the forearm segment to the grasp
#: point of a held tool, along the forearm axis.
DEFAULT_GRIP_OFFSET_M = 0.10

JOINT_NAMES = (
    "shoulder_flexion",
    "shoulder_abduction",
    "upper_arm_rotation",
    "elbow_flexion",
    "forearm_rotation",
)

#: Default ranges of motion in degrees.  Neutral angles default to
#: mid-range.  All of these are overridable through :class:`ArmConfig`.
DEFAULT_LIMITS_DEG: dict[str, tuple[float, float]] = {
    "shoulder_flexion": (-60.0, 180.0),
    "shoulder_abduction": (-30.0, 135.0),
    "upper_arm_rotation": (-90.0, 90.0),
    "elbow_flexion": (0.0, 145.0),
    "forearm_rotation": (-90.0, 85.0),
}


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class DHParameters:
    """Modified-DH row: offset d along z, length a along x, twist alpha
    about x, and a constant joint-angle offset added to the coordinate."""

    d: float
    a: float
    alpha: float
    theta_offset: float


@dataclass(frozen=True)
class JointSpec:
    """One revolute joint: frame parameters, travel limits, neutral angle,
    and its weight in the discomfort measure."""

    name: str
    dh: DHParameters
    lower_limit: float
    upper_limit: float
    neutral: float
    discomfort_weight: float = 1.0

    def __post_init__(self) -> None:
        if not self.lower_limit < self.upper_limit:
            raise InvalidParameterError(
                f"joint {self.name!r}: lower limit {self.lower_limit} must be "
                f"below upper limit {self.upper_limit}"
            )
        if not self.lower_limit <= self.neutral <= self.upper_limit:
            raise InvalidParameterError(
                f"joint {self.name!r}: neutral {self.neutral} outside limits"
            )
        if self.discomfort_weight < 0.0:
            raise InvalidParameterError(
                f"joint {self.name!r}: discomfort weight must be >= 0"
            )


@dataclass(frozen=True)
class BodyParams:
    """Stature [m] and body mass [kg] of the modelled person."""

    stature_m: float
    mass_kg: float

    def __post_init__(self) -> None:
        _require_positive("stature_m", self.stature_m)
        _require_positive("mass_kg", self.mass_kg)


@dataclass(frozen=True)
class Segment:
    """Uniform cylinder segment: geometry, mass, and inertia about its
    center of mass (z axis = long axis)."""

    length_m: float
    radius_m: float
    mass_kg: float
    com_offset_m: float  # distance from the proximal joint along the segment axis
    inertia: np.ndarray  # 3x3 diagonal, kg m^2

    def __post_init__(self) -> None:
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape != (3, 3):
            raise InvalidParameterError("inertia must be a 3x3 matrix")
        inertia.setflags(write=False)
        object.__setattr__(self, "inertia", inertia)


@dataclass(frozen=True)
class SegmentSet:
    """The two arm segments: upper arm and forearm (hand included)."""

    upper_arm: Segment
    forearm: Segment


def _cylinder_inertia(mass: float, radius: float, length: float) -> np.ndarray:
    transverse = mass * radius**2 / 4.0 + mass * length**2 / 12.0
    axial = mass * radius**2 / 2.0
    return np.diag([transverse, transverse, axial])


def derive_segments(body: BodyParams) -> SegmentSet:
    """Derive segment geometry, masses, and inertias from stature and mass.

    Each segment is a uniform cylinder, so the mass center defaults to the
    segment midpoint.
    """
    h = body.stature_m
    m = body.mass_kg
    h_f = FOREARM_LENGTH_FRACTION * h
    r_f = FOREARM_RADIUS_FRACTION * h_f
    h_u = UPPER_ARM_LENGTH_FRACTION * h
    r_u = UPPER_ARM_RADIUS_FRACTION * h_u
    m_f = FOREARM_MASS_SHARE * ARM_MASS_FRACTION * m
    m_u = UPPER_ARM_MASS_SHARE * ARM_MASS_FRACTION * m
    return SegmentSet(
        upper_arm=Segment(h_u, r_u, m_u, h_u / 2.0, _cylinder_inertia(m_u, r_u, h_u)),
        forearm=Segment(h_f, r_f, m_f, h_f / 2.0, _cylinder_inertia(m_f, r_f, h_f)),
    )


@dataclass(frozen=True)
class KinematicChain:
    """Ordered revolute joints plus the base placement and the rigid offset
    from the last joint frame to the grasp point."""

    joints: tuple[JointSpec, ...]
    base_frame: np.ndarray  # 4x4 pose of joint 1 relative to the world
    end_effector_offset: np.ndarray  # 4x4, last joint frame -> grasp point

    def __post_init__(self) -> None:
        if len(self.joints) < 1:
            raise InvalidParameterError("a chain needs at least one joint")
        base = np.asarray(self.base_frame, dtype=float)
        tool = np.asarray(self.end_effector_offset, dtype=float)
        for name, mat in (("base_frame", base), ("end_effector_offset", tool)):
            if mat.shape != (4, 4):
                raise InvalidParameterError(f"{name} must be a 4x4 transform")
        base.setflags(write=False)
        tool.setflags(write=False)
        object.__setattr__(self, "joints", tuple(self.joints))
        object.__setattr__(self, "base_frame", base)
        object.__setattr__(self, "end_effector_offset", tool)

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    @property
    def lower_limits(self) -> np.ndarray:
        return np.array([j.lower_limit for j in self.joints])

    @property
    def upper_limits(self) -> np.ndarray:
        return np.array([j.upper_limit for j in self.joints])

    @property
    def neutrals(self) -> np.ndarray:
        return np.array([j.neutral for j in self.joints])

    @property
    def discomfort_weights(self) -> np.ndarray:
        return np.array([j.discomfort_weight for j in self.joints])


@dataclass(frozen=True)
class JointOverride:
    """Per-joint configuration override; unset fields keep the default."""

    limits_deg: tuple[float, float] | None = None
    neutral_deg: float | None = None
    gamma: float | None = None


@dataclass(frozen=True)
class ArmConfig:
    """Chain-level configuration: joint overrides, grip offset, base pose."""

    joint_overrides: Mapping[str, JointOverride] = field(default_factory=dict)
    grip_offset_m: float = DEFAULT_GRIP_OFFSET_M
    base_frame: np.ndarray | None = None


def _translation(xyz) -> np.ndarray:
    t = np.eye(4)
    t[:3, 3] = xyz
    return t


def build_arm_chain(body: BodyParams, config: ArmConfig | None = None) -> KinematicChain:
    """Build the five-joint right-arm chain for the given body.

    Joints, in order: shoulder flexion/extension, shoulder
    adduction/abduction, upper-arm axial rotation, elbow flexion/extension,
    forearm axial rotation.  Upper-arm and forearm lengths come from
    :func:`derive_segments`.

    Reference pose: with every joint angle zero the arm hangs straight down
    along the base -z axis, fully extended; the grasp point then sits at
    base + (0, 0, -(h_u + h_f + grip_offset)).  Positive shoulder flexion
    raises the arm toward base +x (forward), positive elbow flexion bends
    the forearm further in the same rotational sense, so in the sagittal
    plane the forearm direction makes angle q1 + q4 with the downward
    vertical.
    """
    if config is None:
        config = ArmConfig()
    segments = derive_segments(body)
    h_u = segments.upper_arm.length_m
    h_f = segments.forearm.length_m

    half_pi = math.pi / 2.0
    dh_rows = (
        DHParameters(d=0.0, a=0.0, alpha=half_pi, theta_offset=half_pi),
        DHParameters(d=0.0, a=0.0, alpha=-half_pi, theta_offset=half_pi),
        DHParameters(d=h_u, a=0.0, alpha=-half_pi, theta_offset=half_pi),
        DHParameters(d=0.0, a=0.0, alpha=-half_pi, theta_offset=0.0),
        DHParameters(d=h_f, a=0.0, alpha=half_pi, theta_offset=0.0),
    )

    unknown = set(config.joint_overrides) - set(JOINT_NAMES)
    if unknown:
        raise InvalidParameterError(f"unknown joint name(s) in overrides: {sorted(unknown)}")

    joints = []
    for name, dh in zip(JOINT_NAMES, dh_rows):
        override = config.joint_overrides.get(name, JointOverride())
        lo_deg, hi_deg = override.limits_deg or DEFAULT_LIMITS_DEG[name]
        if not lo_deg < hi_deg:
            raise InvalidParameterError(
                f"joint {name!r}: configured lower limit {lo_deg} deg must be "
                f"below upper limit {hi_deg} deg"
            )
        neutral_deg = override.neutral_deg
        if neutral_deg is None:
            neutral_deg = 0.5 * (lo_deg + hi_deg)
        gamma = 1.0 if override.gamma is None else override.gamma
        joints.append(
            JointSpec(
                name=name,
                dh=dh,
                lower_limit=math.radians(lo_deg),
                upper_limit=math.radians(hi_deg),
                neutral=math.radians(neutral_deg),
                discomfort_weight=gamma,
            )
        )

    base = np.eye(4) if config.base_frame is None else np.asarray(config.base_frame, float)
    return KinematicChain(
        joints=tuple(joints),
        base_frame=base,
        end_effector_offset=_translation((0.0, 0.0, config.grip_offset_m)),
    )
