"""Figure rendering for the report commands.

Each function takes the same row data that goes into the CSV and writes a
PNG next to it.  Rendering is headless (Agg backend).
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_fatigue_curve(families: dict, load_nm: float, path: Path) -> Path:
    """Capacity decay per population maximum, with the constant load line."""
    fig, (ax_cap, ax_norm) = plt.subplots(1, 2, figsize=(10, 4))
    t_max = 0.0
    for gamma_max, series in families.items():
        t = np.asarray(series["t_s"])
        cap = np.asarray(series["capacity_nm"])
        t_max = max(t_max, t[-1] if t.size else 0.0)
        ax_cap.plot(t, cap, label=f"max {gamma_max:g} N·m")
        ax_norm.plot(t, np.asarray(series["normalized_load"]), label=f"max {gamma_max:g} N·m")
    ax_cap.axhline(load_nm, color="k", ls="--", lw=1, label=f"load {load_nm:.1f} N·m")
    ax_cap.set_xlabel("time [s]")
    ax_cap.set_ylabel("capacity [N·m]")
    ax_cap.set_title("Capacity decay under constant load")
    ax_cap.legend(fontsize=8)
    ax_norm.set_xlabel("time [s]")
    ax_norm.set_ylabel("load / capacity [-]")
    ax_norm.set_title("Normalized load")
    ax_norm.legend(fontsize=8)
    return _save(fig, path)


def render_work_rest(t_s, capacity_nm, joint_names, path: Path) -> Path:
    """Sawtooth capacity trajectory over the duty cycle."""
    fig, ax = plt.subplots(figsize=(8, 4))
    capacity_nm = np.asarray(capacity_nm)
    for j, name in enumerate(joint_names):
        ax.plot(t_s, capacity_nm[:, j], label=name)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("capacity [N·m]")
    ax.set_title("Work-rest schedule")
    ax.legend(fontsize=8)
    return _save(fig, path)


def render_sweep(curves: dict, path: Path) -> Path:
    """Objective measures and aggregate along the work distance."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for label, rows in curves.items():
        d = np.asarray(rows["d_m"])
        axes[0].plot(d, np.asarray(rows["f_fatigue"]), label=label)
        axes[1].semilogy(d, np.maximum(np.asarray(rows["f_discomfort"]), 1e-300), label=label)
        axes[2].plot(d, np.asarray(rows["z"]), label=label)
    for ax, title in zip(axes, ("fatigue measure", "discomfort measure (log)", "aggregate Z")):
        ax.set_xlabel("distance [m]")
        ax.set_title(title)
        ax.legend(fontsize=8)
    return _save(fig, path)


def render_pareto(front, selections, path: Path) -> Path:
    """Pareto front with the weight-line selections highlighted."""
    fig, ax = plt.subplots(figsize=(6, 5))
    fd = [p["f_discomfort"] for p in front]
    ff = [p["f_fatigue"] for p in front]
    ax.plot(fd, ff, "o-", ms=4, lw=1, label="front")
    markers = {"-1": "s", "-2": "^", "-0.5": "v"}
    for sel in selections:
        ax.plot(
            sel["f_discomfort"],
            sel["f_fatigue"],
            markers.get(sel["slope"], "x"),
            ms=10,
            label=f"slope {sel['slope']}",
        )
    ax.set_xlabel("discomfort measure")
    ax.set_ylabel("fatigue measure")
    ax.set_title("Pareto front and weight-line selections")
    ax.legend(fontsize=8)
    return _save(fig, path)
