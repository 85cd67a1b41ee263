"""Per-joint strength model and its evolution under load and rest.

Capacity decays under load at a rate proportional to the current capacity
fraction times the demand, and recovers exponentially toward the maximum at
rest.  Both laws are linear ODEs, so the steps below use their exact
solutions: stepping is exact for piecewise-constant loads and composes
(two half steps equal one full step).

Default rates: fatigue 1/min, recovery 2.4/min.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .errors import ConfigurationError, InvalidParameterError

DEFAULT_FATIGUE_RATE_PER_MIN = 1.0
DEFAULT_RECOVERY_RATE_PER_MIN = 2.4

#: Population band of shoulder strength maxima [N m] used for curve families,
#: and the matching multipliers around the median surface.
DEFAULT_GAMMA_MAX_BAND_NM = (40.0, 70.0, 110.0)
POPULATION_SCALES = (0.57, 1.0, 1.57)

DEFAULT_SAMPLE_DT_MIN = 1.0 / 60.0  # one-second sampling


@dataclass(frozen=True)
class StrengthSurface:
    """Bilinear strength table over shoulder and elbow flexion angles.

    Grids are in degrees (ascending), values in N m.  Queries outside the
    grid are clamped to its bounds.
    """

    alpha_s_deg: np.ndarray
    alpha_e_deg: np.ndarray
    torque_nm: np.ndarray

    def __post_init__(self) -> None:
        a_s = np.atleast_1d(np.asarray(self.alpha_s_deg, dtype=float))
        a_e = np.atleast_1d(np.asarray(self.alpha_e_deg, dtype=float))
        values = np.atleast_2d(np.asarray(self.torque_nm, dtype=float))
        if a_s.size == 0 or a_e.size == 0 or values.size == 0:
            raise ConfigurationError("strength table must not be empty")
        if values.shape != (a_s.size, a_e.size):
            raise ConfigurationError(
                f"strength table shape {values.shape} does not match grids "
                f"({a_s.size}, {a_e.size})"
            )
        if np.any(np.diff(a_s) <= 0) or np.any(np.diff(a_e) <= 0):
            raise ConfigurationError("strength grids must be strictly ascending")
        if not np.all(values > 0.0):
            raise ConfigurationError("strength values must be positive")
        for arr in (a_s, a_e, values):
            arr.setflags(write=False)
        object.__setattr__(self, "alpha_s_deg", a_s)
        object.__setattr__(self, "alpha_e_deg", a_e)
        object.__setattr__(self, "torque_nm", values)

    def evaluate(self, alpha_s_deg: float, alpha_e_deg: float) -> float:
        """Bilinear interpolation with clamping at the grid bounds."""
        return float(
            _bilinear(self.alpha_s_deg, self.alpha_e_deg, self.torque_nm,
                      alpha_s_deg, alpha_e_deg)
        )


def _bilinear(xs: np.ndarray, ys: np.ndarray, table: np.ndarray,
              x: float, y: float) -> float:
    x = min(max(float(x), xs[0]), xs[-1])
    y = min(max(float(y), ys[0]), ys[-1])
    i = int(np.clip(np.searchsorted(xs, x, side="right") - 1, 0, xs.size - 2)) if xs.size > 1 else 0
    j = int(np.clip(np.searchsorted(ys, y, side="right") - 1, 0, ys.size - 2)) if ys.size > 1 else 0
    if xs.size == 1 and ys.size == 1:
        return table[0, 0]
    if xs.size == 1:
        ty = (y - ys[j]) / (ys[j + 1] - ys[j])
        return (1 - ty) * table[0, j] + ty * table[0, j + 1]
    if ys.size == 1:
        tx = (x - xs[i]) / (xs[i + 1] - xs[i])
        return (1 - tx) * table[i, 0] + tx * table[i + 1, 0]
    tx = (x - xs[i]) / (xs[i + 1] - xs[i])
    ty = (y - ys[j]) / (ys[j + 1] - ys[j])
    return (
        (1 - tx) * (1 - ty) * table[i, j]
        + tx * (1 - ty) * table[i + 1, j]
        + (1 - tx) * ty * table[i, j + 1]
        + tx * ty * table[i + 1, j + 1]
    )


@dataclass(frozen=True)
class StrengthModel:
    """Per-joint strength surfaces plus a population percentile multiplier."""

    surfaces: Mapping[str, StrengthSurface]
    joint_order: tuple[str, ...]
    population_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.population_scale <= 0.0:
            raise InvalidParameterError("population_scale must be positive")
        missing = [name for name in self.joint_order if name not in self.surfaces]
        if missing:
            raise ConfigurationError(f"no strength surface for joint(s): {missing}")
        object.__setattr__(self, "surfaces", dict(self.surfaces))
        object.__setattr__(self, "joint_order", tuple(self.joint_order))


def strength_at(model: StrengthModel, alpha_s: float, alpha_e: float) -> np.ndarray:
    """Maximum strength of every joint at the given flexion angles [rad].

    Each joint's surface is interpolated bilinearly and scaled by the
    population factor.
    """
    a_s_deg = math.degrees(alpha_s)
    a_e_deg = math.degrees(alpha_e)
    return np.array(
        [
            model.surfaces[name].evaluate(a_s_deg, a_e_deg) * model.population_scale
            for name in model.joint_order
        ]
    )


def default_strength_model() -> StrengthModel:
    """Synthetic placeholder strength surfaces for the five-joint arm.

    Published tables give only plausible ranges, not full surfaces, so these
    defaults anchor the shoulder at a 70 N m median and run the elbow from
    70 N m at full extension down to 40 N m at deep flexion; the remaining
    joints get flat, conservative values.  Override through configuration
    for any quantitative use.
    """
    alpha_s = np.array([-60.0, 0.0, 60.0, 120.0, 180.0])
    alpha_e = np.array([0.0, 36.25, 72.5, 108.75, 145.0])

    def flat(value: float) -> StrengthSurface:
        return StrengthSurface(alpha_s, alpha_e, np.full((5, 5), value))

    elbow_row = np.array([70.0, 62.5, 55.0, 47.5, 40.0])
    surfaces = {
        "shoulder_flexion": flat(70.0),
        "shoulder_abduction": flat(60.0),
        "upper_arm_rotation": flat(35.0),
        "elbow_flexion": StrengthSurface(alpha_s, alpha_e, np.tile(elbow_row, (5, 1))),
        "forearm_rotation": flat(20.0),
    }
    return StrengthModel(
        surfaces=surfaces,
        joint_order=tuple(surfaces),
        population_scale=1.0,
    )


@dataclass(frozen=True)
class CapacityState:
    """Current and maximum torque capacity per joint, with the model rates."""

    current_nm: np.ndarray
    maximum_nm: np.ndarray
    fatigue_rate_per_min: float = DEFAULT_FATIGUE_RATE_PER_MIN
    recovery_rate_per_min: float = DEFAULT_RECOVERY_RATE_PER_MIN
    elapsed_min: float = 0.0

    def __post_init__(self) -> None:
        current = np.atleast_1d(np.asarray(self.current_nm, dtype=float))
        maximum = np.atleast_1d(np.asarray(self.maximum_nm, dtype=float))
        if current.shape != maximum.shape:
            raise InvalidParameterError("capacity vectors must have equal length")
        if not np.all(maximum > 0.0):
            raise InvalidParameterError("maximum capacities must be positive")
        if np.any(current <= 0.0) or np.any(current > maximum * (1.0 + 1e-12)):
            raise InvalidParameterError("capacities must satisfy 0 < current <= maximum")
        if self.fatigue_rate_per_min <= 0.0 or self.recovery_rate_per_min <= 0.0:
            raise InvalidParameterError("rates must be positive")
        current.setflags(write=False)
        maximum.setflags(write=False)
        object.__setattr__(self, "current_nm", current)
        object.__setattr__(self, "maximum_nm", maximum)

    @classmethod
    def fresh(
        cls,
        maximum_nm,
        fatigue_rate_per_min: float = DEFAULT_FATIGUE_RATE_PER_MIN,
        recovery_rate_per_min: float = DEFAULT_RECOVERY_RATE_PER_MIN,
    ) -> "CapacityState":
        maximum = np.atleast_1d(np.asarray(maximum_nm, dtype=float))
        return cls(maximum.copy(), maximum, fatigue_rate_per_min, recovery_rate_per_min)


def _check_dt(dt_min: float) -> float:
    dt_min = float(dt_min)
    if not dt_min > 0.0:
        raise InvalidParameterError(f"dt must be positive, got {dt_min!r}")
    return dt_min


def fatigue_step(state: CapacityState, load_nm, dt_min: float) -> CapacityState:
    """Advance capacity under a constant load for dt minutes (exact step).

    The decay law d(cap)/dt = -k * (cap / max) * load integrates to
    cap * exp(-k * load * dt / max) for a constant load.
    """
    dt = _check_dt(dt_min)
    load = np.atleast_1d(np.asarray(load_nm, dtype=float))
    if load.shape != state.current_nm.shape:
        raise InvalidParameterError("load vector length must match capacity state")
    if np.any(load < 0.0):
        raise InvalidParameterError("loads must be non-negative magnitudes")
    decay = np.exp(
        -state.fatigue_rate_per_min * load * dt / state.maximum_nm
    )
    return replace(
        state,
        current_nm=state.current_nm * decay,
        elapsed_min=state.elapsed_min + dt,
    )


def recovery_step(state: CapacityState, dt_min: float) -> CapacityState:
    """Advance capacity at rest for dt minutes (exact step).

    The recovery law d(cap)/dt = R * (max - cap) integrates to
    max - (max - cap) * exp(-R * dt).
    """
    dt = _check_dt(dt_min)
    deficit = (state.maximum_nm - state.current_nm) * math.exp(
        -state.recovery_rate_per_min * dt
    )
    return replace(
        state,
        current_nm=state.maximum_nm - deficit,
        elapsed_min=state.elapsed_min + dt,
    )


def max_endurance_time(
    gamma_max_nm: float,
    load_nm: float,
    fatigue_rate_per_min: float = DEFAULT_FATIGUE_RATE_PER_MIN,
) -> float:
    """Minutes until a fresh capacity decays to the demand level.

    Closed form (max / (k * load)) * ln(max / load), the crossing time of the
    exact fatigue solution with the constant load line.  A load at or above
    the maximum gives zero endurance; a non-positive load never exhausts the
    joint and returns infinity.
    """
    if gamma_max_nm <= 0.0:
        raise InvalidParameterError("gamma_max must be positive")
    if fatigue_rate_per_min <= 0.0:
        raise InvalidParameterError("fatigue rate must be positive")
    if load_nm <= 0.0:
        return math.inf
    if load_nm >= gamma_max_nm:
        return 0.0
    ratio = gamma_max_nm / load_nm
    return ratio / fatigue_rate_per_min * math.log(ratio)


@dataclass(frozen=True)
class WorkRestSeries:
    """Sampled capacity trajectory over alternating work and rest phases."""

    times_min: np.ndarray
    capacity_nm: np.ndarray  # (n_samples, n_joints)
    phases: tuple[str, ...]
    cycle_end_indices: tuple[int, ...]
    final_state: CapacityState


def simulate_work_rest(
    state: CapacityState,
    load_work_nm,
    t_work_min: float,
    t_rest_min: float,
    cycles: int,
    sample_dt_min: float = DEFAULT_SAMPLE_DT_MIN,
) -> WorkRestSeries:
    """Alternate exact fatigue and recovery steps over a duty cycle.

    Samples are emitted at the given resolution plus every phase boundary;
    phase end states are computed from the phase start in one exact step, so
    the sampling resolution does not affect the trajectory.
    """
    if t_work_min < 0.0 or t_rest_min < 0.0:
        raise InvalidParameterError("phase durations must be non-negative")
    if cycles < 1:
        raise InvalidParameterError("cycles must be >= 1")
    _check_dt(sample_dt_min)
    load = np.atleast_1d(np.asarray(load_work_nm, dtype=float))

    times = [state.elapsed_min]
    rows = [state.current_nm]
    phases = ["work"]
    cycle_ends: list[int] = []

    def run_phase(start: CapacityState, duration: float, label: str) -> CapacityState:
        if duration <= 0.0:
            return start
        n_inner = max(1, math.ceil(duration / sample_dt_min - 1e-9))
        for j in range(1, n_inner + 1):
            t_local = min(j * sample_dt_min, duration)
            if label == "work":
                stepped = fatigue_step(start, load, t_local)
            else:
                stepped = recovery_step(start, t_local)
            times.append(start.elapsed_min + t_local)
            rows.append(stepped.current_nm)
            phases.append(label)
        if label == "work":
            return fatigue_step(start, load, duration)
        return recovery_step(start, duration)

    current = state
    for _ in range(cycles):
        current = run_phase(current, t_work_min, "work")
        current = run_phase(current, t_rest_min, "rest")
        cycle_ends.append(len(times) - 1)

    return WorkRestSeries(
        times_min=np.array(times),
        capacity_nm=np.vstack(rows),
        phases=tuple(phases),
        cycle_end_indices=tuple(cycle_ends),
        final_state=current,
    )
