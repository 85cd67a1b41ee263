"""Posture performance measures: normalized-torque fatigue and joint discomfort.

The fatigue measure sums powered ratios of torque demand to current joint
capacity; it grows as capacity decays, which is what couples posture choice
to fatigue state.  The discomfort measure combines a normalized displacement
from the neutral angle with steep sinusoidal penalty terms near the joint
limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .body_model import KinematicChain
from .capacity import CapacityState
from .errors import InvalidParameterError, InvalidStateError
from .kinematics import Posture

DEFAULT_FATIGUE_EXPONENT = 2.0
PENALTY_SCALE_G = 1.0e6

# The penalty base 0.5*sin(5*ratio + pi/2) + 1 reaches its first local
# minimum at ratio = pi/5 and oscillates beyond it; the ratio is capped
# there so the penalty decreases monotonically away from a limit instead of
# producing spurious interior bumps.  Near the limits (small ratios) the
# expression is evaluated exactly.
PENALTY_RATIO_CAP = math.pi / 5.0


@dataclass(frozen=True)
class FatigueMeasureParams:
    """Exponent applied to each normalized torque before summing."""

    exponent: float = DEFAULT_FATIGUE_EXPONENT

    def __post_init__(self) -> None:
        if not self.exponent > 0.0:
            raise InvalidParameterError("fatigue exponent must be positive")


def fatigue_measure(
    torques: np.ndarray,
    capacity: CapacityState,
    params: FatigueMeasureParams = FatigueMeasureParams(),
) -> float:
    """Sum of (|torque| / current capacity)^p over the joints.

    Depends on torque magnitudes only; capacities at or below zero are
    rejected.  Whether the demand actually fits within capacity is a
    feasibility question handled by the optimizer, not here.
    """
    torques = np.atleast_1d(np.asarray(torques, dtype=float))
    current = capacity.current_nm
    if torques.shape != current.shape:
        raise InvalidParameterError("torque vector length must match capacity state")
    if np.any(current <= 0.0):
        raise InvalidStateError("current capacity must be positive for all joints")
    return float(np.sum((np.abs(torques) / current) ** params.exponent))


def limit_penalties(q, q_upper, q_lower) -> tuple[np.ndarray, np.ndarray]:
    """Penalty terms for proximity to the upper and lower joint limits.

    Each term is (0.5*sin(5*ratio + pi/2) + 1)^100 with ratio the
    distance to that limit as a fraction of the joint range, clamped to
    [0, 1] and capped at ``PENALTY_RATIO_CAP``.  At a limit the value is
    1.5^100 (about 4.07e17); past the cap it holds the base minimum
    0.5^100.  Scalar inputs give scalar-shaped arrays.
    """
    q = np.asarray(q, dtype=float)
    upper = np.asarray(q_upper, dtype=float)
    lower = np.asarray(q_lower, dtype=float)
    span = upper - lower
    if np.any(span <= 0.0):
        raise InvalidParameterError("joint limits must satisfy lower < upper")

    def penalty(distance: np.ndarray) -> np.ndarray:
        ratio = np.clip(distance / span, 0.0, 1.0)
        ratio = np.minimum(ratio, PENALTY_RATIO_CAP)
        return (0.5 * np.sin(5.0 * ratio + math.pi / 2.0) + 1.0) ** 100

    return penalty(upper - q), penalty(q - lower)


@dataclass(frozen=True)
class DiscomfortParams:
    """Joint limits, neutrals, and weights feeding the discomfort measure."""

    q_upper: np.ndarray
    q_lower: np.ndarray
    q_neutral: np.ndarray
    weights: np.ndarray
    penalty_scale: float = PENALTY_SCALE_G

    def __post_init__(self) -> None:
        upper = np.atleast_1d(np.asarray(self.q_upper, dtype=float))
        lower = np.atleast_1d(np.asarray(self.q_lower, dtype=float))
        neutral = np.atleast_1d(np.asarray(self.q_neutral, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if not (upper.shape == lower.shape == neutral.shape == weights.shape):
            raise InvalidParameterError("discomfort parameter vectors must align")
        if np.any(lower >= upper):
            raise InvalidParameterError("joint limits must satisfy lower < upper")
        if np.any(weights < 0.0):
            raise InvalidParameterError("joint weights must be >= 0")
        if self.penalty_scale <= 0.0:
            raise InvalidParameterError("penalty scale must be positive")
        for arr in (upper, lower, neutral, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "q_upper", upper)
        object.__setattr__(self, "q_lower", lower)
        object.__setattr__(self, "q_neutral", neutral)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_chain(cls, chain: KinematicChain, penalty_scale: float = PENALTY_SCALE_G) -> "DiscomfortParams":
        return cls(
            q_upper=chain.upper_limits,
            q_lower=chain.lower_limits,
            q_neutral=chain.neutrals,
            weights=chain.discomfort_weights,
            penalty_scale=penalty_scale,
        )


def discomfort_measure(posture: Posture, params: DiscomfortParams) -> float:
    """Displacement-from-neutral cost plus limit penalties, per joint.

    Per joint: (1/G) * (gamma * d^2 + G*QU + G*QL) where d is the deviation
    from neutral normalized by the joint range.  The measure is minimized at
    the neutral angle and explodes as any joint approaches a limit.
    """
    q = np.asarray(posture.q, dtype=float)
    if q.shape != params.q_upper.shape:
        raise InvalidParameterError("posture length must match discomfort parameters")
    span = params.q_upper - params.q_lower
    displacement = (q - params.q_neutral) / span
    qu, ql = limit_penalties(q, params.q_upper, params.q_lower)
    g = params.penalty_scale
    per_joint = (params.weights * displacement**2 + g * qu + g * ql) / g
    return float(np.sum(per_joint))
