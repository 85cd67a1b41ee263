"""Report commands: each emits one CSV (and a matching PNG figure).

CSV conventions: UTF-8, LF line endings, one header row whose column names
carry the units, floats printed with 9 significant digits so identical
configurations produce byte-identical files.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from . import plots
from .body_model import JOINT_NAMES
from .capacity import max_endurance_time, simulate_work_rest
from .errors import NoSolutionError
from .kinematics import Posture
from .optimizer import (
    ObjectivePoint,
    Weights,
    capacity_after_work,
    fresh_capacity,
    pareto_filter,
    predict_posture,
    reference_torques,
    scalarize,
    sweep_distance,
)
from .scenario import DrillingScenario

#: Weight-line slopes reported by the pareto command and the weight pairs
#: (discomfort, fatigue) they correspond to.
PARETO_SLOPE_WEIGHTS = (
    ("-1", (0.5, 0.5)),
    ("-2", (2.0 / 3.0, 1.0 / 3.0)),
    ("-0.5", (1.0 / 3.0, 2.0 / 3.0)),
)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _angles_deg(posture: Posture) -> np.ndarray:
    return np.degrees(posture.q)


def cmd_fatigue_curve(
    scenario: DrillingScenario,
    out_dir: Path,
    gamma_max_list: tuple[float, ...] | None = None,
    duration_s: float | None = None,
    figures: bool = True,
) -> list[Path]:
    """Capacity decay curves for a band of population maxima.

    The load is the shoulder-flexion torque demand computed at the
    scenario's reference drilling posture and held constant; one curve
    family per maximum, each annotated with its endurance time.
    """
    band = gamma_max_list or scenario.gamma_max_band_nm
    duration = duration_s or scenario.fatigue_curve_duration_s
    load = float(abs(reference_torques(scenario)[0]))
    k = scenario.fatigue_rate_per_min
    t_s = np.arange(0.0, duration + scenario.sample_dt_s / 2.0, scenario.sample_dt_s)

    header = [
        "gamma_max_nm",
        "t_s",
        "capacity_nm",
        "load_nm",
        "normalized_load",
        "met_s",
        "status",
    ]
    rows: list[list] = []
    families: dict[float, dict] = {}
    for gamma_max in band:
        capacity = gamma_max * np.exp(-k * load * (t_s / 60.0) / gamma_max)
        met_min = max_endurance_time(gamma_max, load, k)
        met_s = met_min * 60.0 if math.isfinite(met_min) else math.inf
        status = "overload" if load >= gamma_max else "ok"
        families[gamma_max] = {
            "t_s": t_s,
            "capacity_nm": capacity,
            "normalized_load": load / capacity,
        }
        for t, cap in zip(t_s, capacity):
            rows.append([gamma_max, t, cap, load, load / cap, met_s, status])

    out = [_write_csv(Path(out_dir) / "fatigue_curve.csv", header, rows)]
    if figures:
        out.append(
            plots.render_fatigue_curve(families, load, Path(out_dir) / "fatigue_curve.png")
        )
    return out


def cmd_work_rest(
    scenario: DrillingScenario, out_dir: Path, figures: bool = True
) -> list[Path]:
    """Capacity trajectory over the configured work-rest duty cycle."""
    load = np.abs(reference_torques(scenario))
    series = simulate_work_rest(
        fresh_capacity(scenario),
        load,
        t_work_min=scenario.work_s / 60.0,
        t_rest_min=scenario.rest_s / 60.0,
        cycles=scenario.cycles,
        sample_dt_min=scenario.sample_dt_s / 60.0,
    )
    t_s = series.times_min * 60.0
    header = ["t_s", "phase"] + [f"capacity_{name}_nm" for name in JOINT_NAMES]
    rows = [
        [t, phase, *caps]
        for t, phase, caps in zip(t_s, series.phases, series.capacity_nm)
    ]
    out = [_write_csv(Path(out_dir) / "work_rest.csv", header, rows)]
    if figures:
        out.append(
            plots.render_work_rest(t_s, series.capacity_nm, JOINT_NAMES,
                                   Path(out_dir) / "work_rest.png")
        )
    return out


def _sweep_rows(points: list[ObjectivePoint], weights: Weights, label: str) -> list[list]:
    normalizers = (
        max(p.f_discomfort for p in points),
        max(p.f_fatigue for p in points),
    )
    rows = []
    for p in points:
        angles = _angles_deg(p.posture)
        rows.append(
            [
                label,
                p.metadata["distance_m"],
                angles[0],
                angles[3],
                *p.metadata["torques_nm"],
                p.f_fatigue,
                p.f_discomfort,
                scalarize(p, weights, normalizers),
            ]
        )
    return rows


def cmd_sweep(
    scenario: DrillingScenario,
    out_dir: Path,
    fatigued: bool = False,
    steps: int | None = None,
    figures: bool = True,
) -> list[Path]:
    """Objective measures along the work distance, fresh and optionally
    after one work phase of fatigue."""
    weights = Weights.from_pair(*scenario.weights)
    states = [("fresh", fresh_capacity(scenario))]
    if fatigued:
        states.append(("fatigued", capacity_after_work(scenario)))

    header = [
        "capacity_state",
        "d_m",
        "alpha_s_deg",
        "alpha_e_deg",
        *[f"torque_{name}_nm" for name in JOINT_NAMES],
        "f_fatigue",
        "f_discomfort",
        "z",
    ]
    rows: list[list] = []
    curves: dict[str, dict] = {}
    for label, state in states:
        points = sweep_distance(scenario, state, steps=steps)
        if not points:
            raise NoSolutionError(f"sweep with {label} capacity has no feasible posture")
        new_rows = _sweep_rows(points, weights, label)
        rows.extend(new_rows)
        curves[label] = {
            "d_m": [r[1] for r in new_rows],
            "f_fatigue": [r[-3] for r in new_rows],
            "f_discomfort": [r[-2] for r in new_rows],
            "z": [r[-1] for r in new_rows],
        }

    out = [_write_csv(Path(out_dir) / "sweep.csv", header, rows)]
    if figures:
        out.append(plots.render_sweep(curves, Path(out_dir) / "sweep.png"))
    return out


def cmd_pareto(
    scenario: DrillingScenario,
    out_dir: Path,
    steps: int | None = None,
    figures: bool = True,
) -> list[Path]:
    """Pareto front of the fresh sweep plus weight-line selections."""
    points = sweep_distance(scenario, fresh_capacity(scenario), steps=steps)
    if not points:
        raise NoSolutionError("sweep has no feasible posture; no front to report")
    normalizers = (
        max(p.f_discomfort for p in points),
        max(p.f_fatigue for p in points),
    )
    front = pareto_filter(points)

    header = [
        "kind",
        "slope",
        "w_discomfort",
        "w_fatigue",
        "d_m",
        "alpha_s_deg",
        "alpha_e_deg",
        "f_discomfort",
        "f_fatigue",
        "z",
    ]
    rows: list[list] = []
    front_dicts = []
    equal = Weights.equal()
    for p in front.points:
        angles = _angles_deg(p.posture)
        rows.append(
            [
                "front",
                "",
                "",
                "",
                p.metadata["distance_m"],
                angles[0],
                angles[3],
                p.f_discomfort,
                p.f_fatigue,
                scalarize(p, equal, normalizers),
            ]
        )
        front_dicts.append({"f_discomfort": p.f_discomfort, "f_fatigue": p.f_fatigue})

    selections = []
    for slope, (w_d, w_f) in PARETO_SLOPE_WEIGHTS:
        weights = Weights.from_pair(w_d, w_f)
        best = min(front.points, key=lambda p: scalarize(p, weights, normalizers))
        angles = _angles_deg(best.posture)
        rows.append(
            [
                "selection",
                slope,
                w_d,
                w_f,
                best.metadata["distance_m"],
                angles[0],
                angles[3],
                best.f_discomfort,
                best.f_fatigue,
                scalarize(best, weights, normalizers),
            ]
        )
        selections.append(
            {
                "slope": slope,
                "f_discomfort": best.f_discomfort,
                "f_fatigue": best.f_fatigue,
            }
        )

    out = [_write_csv(Path(out_dir) / "pareto.csv", header, rows)]
    if figures:
        out.append(plots.render_pareto(front_dicts, selections, Path(out_dir) / "pareto.png"))
    return out


def cmd_predict(
    scenario: DrillingScenario,
    out_dir: Path,
    weights: Weights | None = None,
    fatigued: bool = False,
    steps: int | None = None,
    figures: bool = True,
) -> list[Path]:
    """Single optimal-posture prediction for the configured weights."""
    weights = weights or Weights.from_pair(*scenario.weights)
    state = capacity_after_work(scenario) if fatigued else fresh_capacity(scenario)
    prediction = predict_posture(scenario, weights, state, steps=steps)

    header = [
        "capacity_state",
        "w_discomfort",
        "w_fatigue",
        "d_m",
        *[f"{name}_deg" for name in JOINT_NAMES],
        "f_discomfort",
        "f_fatigue",
        "z",
    ]
    angles = _angles_deg(prediction.posture)
    rows = [
        [
            "fatigued" if fatigued else "fresh",
            weights.w[0],
            weights.w[1],
            prediction.distance_m,
            *angles,
            prediction.point.f_discomfort,
            prediction.point.f_fatigue,
            prediction.z,
        ]
    ]
    return [_write_csv(Path(out_dir) / "predict.csv", header, rows)]
