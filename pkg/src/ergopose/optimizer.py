"""Constrained two-objective posture optimization over the work distance.

The design variable for the drilling case is the shoulder-to-hole distance:
each distance is resolved to candidate postures by planar inverse
kinematics, candidates are screened against reach, joint-limit, and
strength constraints, scored with the fatigue and discomfort measures, and
aggregated with normalized weighted sums.  Pareto filtering exposes the
trade-off front.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import CapacityState, fatigue_step, strength_at
from .errors import InvalidParameterError, NoSolutionError
from .kinematics import Posture, forward_kinematics, planar_ik
from .objectives import (
    DiscomfortParams,
    FatigueMeasureParams,
    discomfort_measure,
    fatigue_measure,
    limit_penalties,
)
from .scenario import DrillingScenario, build_wrench
from .statics import ExternalWrench, static_joint_torques

logger = logging.getLogger(__name__)

REACH_RESIDUAL_TOL_M = 1e-6

#: Candidates whose largest limit-penalty term exceeds this are dropped
#: before normalization so that near-limit blowups cannot wash out the
#: discomfort scale of the rest of the sweep.
PENALTY_EXCLUSION_THRESHOLD = 1e15


@dataclass(frozen=True)
class FeasibilityReport:
    """Constraint evaluation for one posture: reach residual, signed limit
    excesses, and torque excess over current capacity (positive = violated)."""

    reach_residual_m: float
    limit_violations_rad: np.ndarray
    strength_violations_nm: np.ndarray

    @property
    def feasible(self) -> bool:
        return (
            self.reach_residual_m < REACH_RESIDUAL_TOL_M
            and not np.any(self.limit_violations_rad > 0.0)
            and not np.any(self.strength_violations_nm > 0.0)
        )


@dataclass(frozen=True)
class Weights:
    """Non-negative objective weights summing to one."""

    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        if np.any(w < 0.0):
            raise InvalidParameterError("weights must be non-negative")
        if abs(float(np.sum(w)) - 1.0) > 1e-12:
            raise InvalidParameterError("weights must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_pair(cls, w_discomfort: float, w_fatigue: float) -> "Weights":
        total = w_discomfort + w_fatigue
        if total <= 0.0:
            raise InvalidParameterError("at least one weight must be positive")
        return cls(np.array([w_discomfort / total, w_fatigue / total]))

    @classmethod
    def equal(cls) -> "Weights":
        return cls(np.array([0.5, 0.5]))


@dataclass(frozen=True)
class ObjectivePoint:
    """One evaluated posture in objective space."""

    f_fatigue: float
    f_discomfort: float
    posture: Posture
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, value in (("f_fatigue", self.f_fatigue), ("f_discomfort", self.f_discomfort)):
            if not math.isfinite(value) or value < 0.0:
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class ParetoSet:
    """Mutually non-dominated points, ordered by discomfort ascending."""

    points: tuple[ObjectivePoint, ...]

    def __len__(self) -> int:
        return len(self.points)


def check_feasibility(
    chain,
    segments,
    posture: Posture,
    target_m: np.ndarray,
    wrench: ExternalWrench,
    capacity: CapacityState,
    g: float = 9.81,
) -> FeasibilityReport:
    """Evaluate reach, joint-limit, and strength constraints for a posture."""
    position = forward_kinematics(chain, posture).position
    residual = float(np.linalg.norm(position - np.asarray(target_m, dtype=float)))
    q = posture.q
    limit_excess = np.maximum(q - chain.upper_limits, chain.lower_limits - q)
    torques = static_joint_torques(chain, segments, posture, wrench, g)
    strength_excess = np.abs(torques) - capacity.current_nm
    return FeasibilityReport(
        reach_residual_m=residual,
        limit_violations_rad=limit_excess,
        strength_violations_nm=strength_excess,
    )


def scalarize(
    point: ObjectivePoint,
    weights: Weights,
    normalizers: tuple[float, float],
) -> float:
    """Weighted sum of the normalized objectives.

    ``normalizers`` is (max discomfort, max fatigue) over the candidate set;
    both must be positive.
    """
    max_discomfort, max_fatigue = normalizers
    if max_discomfort <= 0.0 or max_fatigue <= 0.0:
        raise InvalidParameterError("normalizers must be positive")
    return float(
        weights.w[0] * point.f_discomfort / max_discomfort
        + weights.w[1] * point.f_fatigue / max_fatigue
    )


def pareto_filter(points: list[ObjectivePoint]) -> ParetoSet:
    """Maximal non-dominated subset under minimization of both objectives.

    Exact duplicates in objective space collapse to the first occurrence.
    Output is ordered by discomfort ascending (fatigue breaks ties).
    """
    if not points:
        return ParetoSet(())
    fd = np.array([p.f_discomfort for p in points])
    ff = np.array([p.f_fatigue for p in points])
    order = np.lexsort((ff, fd))

    kept: list[ObjectivePoint] = []
    best_ff = math.inf
    group_fd = None
    for idx in order:
        if group_fd is not None and fd[idx] == group_fd:
            continue  # same-discomfort group: only its lowest-fatigue member can survive
        group_fd = fd[idx]
        if ff[idx] < best_ff:
            kept.append(points[idx])
            best_ff = ff[idx]
    return ParetoSet(tuple(kept))


def reference_torques(scenario: DrillingScenario) -> np.ndarray:
    """Static torque demand at the scenario's reference drilling posture."""
    segments, chain = scenario.build_model()
    return static_joint_torques(
        chain,
        segments,
        scenario.reference_posture(),
        build_wrench(scenario),
        scenario.gravity_m_s2,
    )


def fresh_capacity(scenario: DrillingScenario) -> CapacityState:
    """Full capacity, with per-joint maxima taken from the strength surfaces
    at the reference drilling posture and held fixed thereafter."""
    maxima = strength_at(
        scenario.strength,
        math.radians(scenario.reference_alpha_s_deg),
        math.radians(scenario.reference_alpha_e_deg),
    )
    return CapacityState.fresh(
        maxima,
        fatigue_rate_per_min=scenario.fatigue_rate_per_min,
        recovery_rate_per_min=scenario.recovery_rate_per_min,
    )


def capacity_after_work(
    scenario: DrillingScenario,
    capacity: CapacityState | None = None,
    work_s: float | None = None,
) -> CapacityState:
    """Capacity after holding the reference drilling posture under the task
    wrench for one work phase."""
    state = fresh_capacity(scenario) if capacity is None else capacity
    duration_min = (scenario.work_s if work_s is None else work_s) / 60.0
    if duration_min <= 0.0:
        return state
    load = np.abs(reference_torques(scenario))
    return fatigue_step(state, load, duration_min)


def _clamp_distance_range(
    chain, d_range: tuple[float, float]
) -> tuple[float, float]:
    l1 = chain.joints[2].dh.d
    l2 = chain.joints[4].dh.d + chain.end_effector_offset[2, 3]
    lo = max(d_range[0], abs(l1 - l2))
    hi = min(d_range[1], l1 + l2)
    return lo, hi


def sweep_distance(
    scenario: DrillingScenario,
    capacity: CapacityState,
    d_range: tuple[float, float] | None = None,
    steps: int | None = None,
) -> list[ObjectivePoint]:
    """Evaluate both measures along the work-distance grid.

    For each distance the planar-IK candidates are screened for feasibility
    and near-limit penalty blowups; among the surviving branches the one
    with the lowest equal-weight aggregate (normalized over the whole
    sweep's candidates) is retained.  Distances with no usable candidate are
    omitted with a logged diagnostic.  Points come back in grid order with
    the distance recorded in their metadata.
    """
    segments, chain = scenario.build_model()
    wrench = build_wrench(scenario)
    d_lo, d_hi = _clamp_distance_range(chain, d_range or scenario.d_range_m)
    if not d_lo <= d_hi:
        logger.warning("distance range is empty after workspace clamping")
        return []
    n_steps = steps or scenario.sweep_steps
    if n_steps < 2:
        raise InvalidParameterError("sweep needs at least 2 steps")
    grid = np.linspace(d_lo, d_hi, n_steps)

    discomfort_params = DiscomfortParams.from_chain(chain)
    fatigue_params = FatigueMeasureParams(scenario.fatigue_exponent)
    drop = scenario.hole_drop_m
    base = np.asarray(chain.base_frame, float)

    candidates: list[list[ObjectivePoint]] = []
    for d in grid:
        local: list[ObjectivePoint] = []
        target = (base @ np.array([d, 0.0, -drop, 1.0]))[:3]
        for branch, posture in enumerate(planar_ik(chain, d, drop)):
            report = check_feasibility(
                chain, segments, posture, target, wrench, capacity, scenario.gravity_m_s2
            )
            if not report.feasible:
                logger.debug("d=%.4f m branch %d infeasible", d, branch)
                continue
            qu, ql = limit_penalties(posture.q, chain.upper_limits, chain.lower_limits)
            if max(qu.max(), ql.max()) > PENALTY_EXCLUSION_THRESHOLD:
                logger.debug("d=%.4f m branch %d dropped: limit penalty blowup", d, branch)
                continue
            torques = static_joint_torques(
                chain, segments, posture, wrench, scenario.gravity_m_s2
            )
            local.append(
                ObjectivePoint(
                    f_fatigue=fatigue_measure(torques, capacity, fatigue_params),
                    f_discomfort=discomfort_measure(posture, discomfort_params),
                    posture=posture,
                    metadata={"distance_m": float(d), "branch": branch,
                              "torques_nm": torques},
                )
            )
        if not local:
            logger.info("no feasible posture at d=%.4f m; distance omitted", d)
        candidates.append(local)

    flat = [p for local in candidates for p in local]
    if not flat:
        logger.warning("sweep produced no feasible candidates")
        return []
    normalizers = (
        max(p.f_discomfort for p in flat),
        max(p.f_fatigue for p in flat),
    )
    equal = Weights.equal()
    selected: list[ObjectivePoint] = []
    for local in candidates:
        if not local:
            continue
        selected.append(min(local, key=lambda p: (scalarize(p, equal, normalizers),
                                                  p.metadata["branch"])))
    return selected


@dataclass(frozen=True)
class Prediction:
    """Outcome of a posture prediction: the selected point and its score."""

    posture: Posture
    distance_m: float
    z: float
    point: ObjectivePoint
    normalizers: tuple[float, float]


def predict_posture(
    scenario: DrillingScenario,
    weights: Weights,
    capacity: CapacityState,
    d_range: tuple[float, float] | None = None,
    steps: int | None = None,
) -> Prediction:
    """Sweep the distance grid and return the aggregate-minimizing point.

    Normalizers come from the sweep itself.  Ties resolve to the smaller
    distance (grid order).
    """
    points = sweep_distance(scenario, capacity, d_range=d_range, steps=steps)
    if not points:
        raise NoSolutionError("no feasible posture over the swept distance range")
    normalizers = (
        max(p.f_discomfort for p in points),
        max(p.f_fatigue for p in points),
    )
    best = None
    best_z = math.inf
    for point in points:  # grid order, so ties keep the smaller distance
        z = scalarize(point, weights, normalizers)
        if z < best_z:
            best = point
            best_z = z
    return Prediction(
        posture=best.posture,
        distance_m=best.metadata["distance_m"],
        z=best_z,
        point=best,
        normalizers=normalizers,
    )
