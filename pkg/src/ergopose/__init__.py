"""Fatigue-aware posture prediction and analysis for manual work.

The package models a human arm as a revolute-joint chain, computes static
joint torques under gravity and tool loads, evolves per-joint capacity with
fatigue and recovery dynamics, and selects work postures by weighted-sum
multi-objective optimization over fatigue and discomfort measures.
"""

__version__ = "0.1.0"

from .body_model import (
    ArmConfig,
    BodyParams,
    JointOverride,
    JointSpec,
    KinematicChain,
    SegmentSet,
    build_arm_chain,
    derive_segments,
)
from .capacity import (
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
from .errors import (
    ConfigurationError,
    ErgoposeError,
    InvalidParameterError,
    InvalidStateError,
    NoSolutionError,
)
from .kinematics import Posture, Pose, forward_kinematics, jacobian, planar_ik
from .objectives import (
    DiscomfortParams,
    FatigueMeasureParams,
    discomfort_measure,
    fatigue_measure,
    limit_penalties,
)
from .optimizer import (
    FeasibilityReport,
    ObjectivePoint,
    ParetoSet,
    Prediction,
    Weights,
    capacity_after_work,
    check_feasibility,
    fresh_capacity,
    pareto_filter,
    predict_posture,
    scalarize,
    sweep_distance,
)
from .scenario import DrillingScenario, build_wrench
from .statics import (
    ExternalWrench,
    gravity_torques,
    load_torques,
    potential_energy,
    static_joint_torques,
)

__all__ = [name for name in dir() if not name.startswith("_")]
