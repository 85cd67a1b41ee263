"""Scenario configuration: JSON schema, validation, and construction.

The configuration file is a single JSON object; every key is optional and
falls back to the drilling-scenario default.  Unknown keys are rejected.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .body_model import ArmConfig, BodyParams, JOINT_NAMES, JointOverride
from .capacity import StrengthModel, StrengthSurface, default_strength_model
from .errors import ConfigurationError, InvalidParameterError
from .scenario import DrillingScenario

SCHEMA_VERSION = 1

_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_NON_NEGATIVE = {"type": "number", "minimum": 0}

_SURFACE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["alpha_s_deg", "alpha_e_deg", "torque_nm"],
    "properties": {
        "alpha_s_deg": {"type": "array", "items": _NUMBER, "minItems": 1},
        "alpha_e_deg": {"type": "array", "items": _NUMBER, "minItems": 1},
        "torque_nm": {
            "type": "array",
            "items": {"type": "array", "items": _POSITIVE, "minItems": 1},
            "minItems": 1,
        },
    },
}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ergopose scenario configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema_version": {"type": "integer", "enum": [SCHEMA_VERSION]},
        "stature_m": _POSITIVE,
        "mass_kg": _POSITIVE,
        "grip_offset_m": _NON_NEGATIVE,
        "joints": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "enum": list(JOINT_NAMES)},
                    "limits_deg": {
                        "type": "array",
                        "items": _NUMBER,
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "neutral_deg": _NUMBER,
                    "gamma": _NON_NEGATIVE,
                },
            },
        },
        "tool_mass_kg": _NON_NEGATIVE,
        "drilling_force_n": _NON_NEGATIVE,
        "two_handed": {"type": "boolean"},
        "drill_axis": {
            "type": "array",
            "items": _NUMBER,
            "minItems": 3,
            "maxItems": 3,
        },
        "hole_drop_m": _NUMBER,
        "work_s": _NON_NEGATIVE,
        "rest_s": _NON_NEGATIVE,
        "cycles": {"type": "integer", "minimum": 1},
        "d_range_m": {
            "type": "array",
            "items": _NON_NEGATIVE,
            "minItems": 2,
            "maxItems": 2,
        },
        "sweep_steps": {"type": "integer", "minimum": 2},
        "weights": {
            "type": "array",
            "items": _NON_NEGATIVE,
            "minItems": 2,
            "maxItems": 2,
        },
        "fatigue_exponent_p": _POSITIVE,
        "fatigue_rate_per_min": _POSITIVE,
        "recovery_rate_per_min": _POSITIVE,
        "gravity_m_s2": _POSITIVE,
        "reference_alpha_s_deg": _NUMBER,
        "reference_alpha_e_deg": _NUMBER,
        "gamma_max_band_nm": {"type": "array", "items": _POSITIVE, "minItems": 1},
        "fatigue_curve_duration_s": _POSITIVE,
        "sample_dt_s": _POSITIVE,
        "strength": {"$ref": "#/$defs/strength"},
        "strength_file": {"type": "string"},
    },
    "$defs": {
        "strength": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "population_scale": _POSITIVE,
                "surfaces": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {name: _SURFACE_SCHEMA for name in JOINT_NAMES},
                },
            },
        },
    },
}

STRENGTH_SCHEMA = CONFIG_SCHEMA["$defs"]["strength"]


def load_config(path: str | Path) -> dict:
    """Read and validate a configuration file, returning the raw mapping."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    validate_config(raw)
    return raw


def validate_config(raw: dict) -> None:
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigurationError(f"invalid configuration at {where}: {exc.message}") from exc


def config_hash(raw: dict) -> str:
    """Stable digest of the configuration content."""
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _strength_from_config(section: dict | None) -> StrengthModel:
    base = default_strength_model()
    if not section:
        return base
    surfaces = dict(base.surfaces)
    for name, spec in (section.get("surfaces") or {}).items():
        try:
            surfaces[name] = StrengthSurface(
                alpha_s_deg=np.asarray(spec["alpha_s_deg"], dtype=float),
                alpha_e_deg=np.asarray(spec["alpha_e_deg"], dtype=float),
                torque_nm=np.asarray(spec["torque_nm"], dtype=float),
            )
        except ConfigurationError as exc:
            raise ConfigurationError(f"strength surface for {name!r}: {exc}") from exc
    return StrengthModel(
        surfaces=surfaces,
        joint_order=base.joint_order,
        population_scale=section.get("population_scale", 1.0),
    )


def _load_strength_file(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read strength file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"strength file {path} is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, STRENGTH_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"invalid strength file {path}: {exc.message}") from exc
    return raw


def scenario_from_config(raw: dict, base_dir: str | Path | None = None) -> DrillingScenario:
    """Build a scenario from a validated configuration mapping.

    ``base_dir`` resolves a relative ``strength_file`` reference.
    """
    overrides = {}
    for entry in raw.get("joints", []):
        overrides[entry["name"]] = JointOverride(
            limits_deg=tuple(entry["limits_deg"]) if "limits_deg" in entry else None,
            neutral_deg=entry.get("neutral_deg"),
            gamma=entry.get("gamma"),
        )

    kwargs: dict[str, Any] = {}
    if "stature_m" in raw or "mass_kg" in raw:
        kwargs["body"] = BodyParams(raw.get("stature_m", 1.75), raw.get("mass_kg", 70.0))
    if overrides or "grip_offset_m" in raw:
        kwargs["arm"] = ArmConfig(
            joint_overrides=overrides,
            grip_offset_m=raw.get("grip_offset_m", ArmConfig().grip_offset_m),
        )
    if "strength" in raw and "strength_file" in raw:
        raise ConfigurationError("give either 'strength' or 'strength_file', not both")
    if "strength" in raw:
        kwargs["strength"] = _strength_from_config(raw["strength"])
    elif "strength_file" in raw:
        path = Path(raw["strength_file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        kwargs["strength"] = _strength_from_config(_load_strength_file(path))

    direct = {
        "tool_mass_kg": "tool_mass_kg",
        "drilling_force_n": "drilling_force_n",
        "two_handed": "two_handed",
        "hole_drop_m": "hole_drop_m",
        "work_s": "work_s",
        "rest_s": "rest_s",
        "cycles": "cycles",
        "sweep_steps": "sweep_steps",
        "fatigue_exponent_p": "fatigue_exponent",
        "fatigue_rate_per_min": "fatigue_rate_per_min",
        "recovery_rate_per_min": "recovery_rate_per_min",
        "gravity_m_s2": "gravity_m_s2",
        "reference_alpha_s_deg": "reference_alpha_s_deg",
        "reference_alpha_e_deg": "reference_alpha_e_deg",
        "fatigue_curve_duration_s": "fatigue_curve_duration_s",
        "sample_dt_s": "sample_dt_s",
    }
    for key, attr in direct.items():
        if key in raw:
            kwargs[attr] = raw[key]
    for key, attr in (
        ("drill_axis", "drill_axis"),
        ("d_range_m", "d_range_m"),
        ("weights", "weights"),
        ("gamma_max_band_nm", "gamma_max_band_nm"),
    ):
        if key in raw:
            kwargs[attr] = tuple(raw[key])

    try:
        return DrillingScenario(**kwargs)
    except InvalidParameterError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_scenario(path: str | Path) -> tuple[DrillingScenario, dict]:
    """Load a configuration file into a scenario plus its raw mapping."""
    raw = load_config(path)
    return scenario_from_config(raw, base_dir=Path(path).parent), raw
