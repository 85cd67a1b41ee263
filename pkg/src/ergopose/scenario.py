"""The drilling task scenario: task parameters and derived model objects.

Defaults describe a two-handed drilling job: a 5 kg machine pushed with
49 N, 30 s per hole followed by 60 s of rest, holes swept over shoulder
distances of 0.4 to 0.7 m.  With two hands on the machine the external
loads split evenly, so the per-arm wrench is half of the total.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .body_model import (
    ArmConfig,
    BodyParams,
    KinematicChain,
    SegmentSet,
    build_arm_chain,
    derive_segments,
)
from .capacity import (
    DEFAULT_FATIGUE_RATE_PER_MIN,
    DEFAULT_GAMMA_MAX_BAND_NM,
    DEFAULT_RECOVERY_RATE_PER_MIN,
    StrengthModel,
    default_strength_model,
)
from .errors import InvalidParameterError
from .kinematics import Posture
from .objectives import DEFAULT_FATIGUE_EXPONENT
from .statics import STANDARD_GRAVITY, ExternalWrench


@dataclass(frozen=True)
class DrillingScenario:
    """Everything needed to reproduce the drilling case study."""

    body: BodyParams = field(default_factory=lambda: BodyParams(1.75, 70.0))
    arm: ArmConfig = field(default_factory=ArmConfig)
    strength: StrengthModel = field(default_factory=default_strength_model)
    tool_mass_kg: float = 5.0
    drilling_force_n: float = 49.0
    two_handed: bool = True
    #: Direction of the feed-force reaction acting on the hand (unit vector,
    #: world frame).  Drilling forward along +x pushes the hand back to -x.
    drill_axis: tuple[float, float, float] = (-1.0, 0.0, 0.0)
    hole_drop_m: float = 0.0
    work_s: float = 30.0
    rest_s: float = 60.0
    cycles: int = 10
    d_range_m: tuple[float, float] = (0.4, 0.7)
    sweep_steps: int = 61
    weights: tuple[float, float] = (0.5, 0.5)
    fatigue_exponent: float = DEFAULT_FATIGUE_EXPONENT
    fatigue_rate_per_min: float = DEFAULT_FATIGUE_RATE_PER_MIN
    recovery_rate_per_min: float = DEFAULT_RECOVERY_RATE_PER_MIN
    gravity_m_s2: float = STANDARD_GRAVITY
    reference_alpha_s_deg: float = 30.0
    reference_alpha_e_deg: float = 90.0
    gamma_max_band_nm: tuple[float, ...] = DEFAULT_GAMMA_MAX_BAND_NM
    fatigue_curve_duration_s: float = 600.0
    sample_dt_s: float = 1.0

    def __post_init__(self) -> None:
        if self.tool_mass_kg < 0.0 or self.drilling_force_n < 0.0:
            raise InvalidParameterError("tool mass and drilling force must be >= 0")
        if self.work_s < 0.0 or self.rest_s < 0.0:
            raise InvalidParameterError("work and rest durations must be >= 0")
        if self.cycles < 1:
            raise InvalidParameterError("cycles must be >= 1")
        if not self.d_range_m[0] <= self.d_range_m[1]:
            raise InvalidParameterError("d_range_m must be ordered (low, high)")
        if self.sweep_steps < 2:
            raise InvalidParameterError("sweep_steps must be >= 2")
        if any(w < 0.0 for w in self.weights) or sum(self.weights) <= 0.0:
            raise InvalidParameterError("weights must be non-negative and not all zero")
        if self.fatigue_exponent <= 0.0:
            raise InvalidParameterError("fatigue exponent must be positive")
        if self.fatigue_rate_per_min <= 0.0 or self.recovery_rate_per_min <= 0.0:
            raise InvalidParameterError("rates must be positive")
        if self.gravity_m_s2 <= 0.0:
            raise InvalidParameterError("gravity must be positive")
        if self.sample_dt_s <= 0.0 or self.fatigue_curve_duration_s <= 0.0:
            raise InvalidParameterError("durations must be positive")
        if np.linalg.norm(self.drill_axis) == 0.0:
            raise InvalidParameterError("drill_axis must be a nonzero vector")

    def build_model(self) -> tuple[SegmentSet, KinematicChain]:
        """Segments and chain for this scenario's body and arm config."""
        return derive_segments(self.body), build_arm_chain(self.body, self.arm)

    def reference_posture(self) -> Posture:
        """The configured drilling posture: shoulder and elbow flexed, the
        out-of-plane joints at zero."""
        return Posture(
            np.array(
                [
                    math.radians(self.reference_alpha_s_deg),
                    0.0,
                    0.0,
                    math.radians(self.reference_alpha_e_deg),
                    0.0,
                ]
            )
        )

    def normalized_weights(self) -> tuple[float, float]:
        total = sum(self.weights)
        return (self.weights[0] / total, self.weights[1] / total)


def build_wrench(scenario: DrillingScenario) -> ExternalWrench:
    """Per-arm external wrench at the grasp point.

    Tool weight acts straight down and the drilling feed reaction acts along
    the configured drill axis; with a two-handed grip both are halved.
    The moment defaults to zero.
    """
    axis = np.asarray(scenario.drill_axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    force = np.array([0.0, 0.0, -scenario.tool_mass_kg * scenario.gravity_m_s2])
    force = force + scenario.drilling_force_n * axis
    if scenario.two_handed:
        force = force / 2.0
    return ExternalWrench(force=force, moment=np.zeros(3))
