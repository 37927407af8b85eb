"""Declarative experiment configs: TOML files merged over documented defaults."""

from __future__ import annotations

import copy
import sys

from ..chip.crosstalk import DEFAULT_CROSSTALK
from ..errors import ConfigurationError

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

NOISE_DEFAULTS = {
    "crosstalk": False,
    "k": list(DEFAULT_CROSSTALK["k"]),
    "eta": DEFAULT_CROSSTALK["eta"],
    "eps": DEFAULT_CROSSTALK["eps"],
    "chip_seed": 0,
    "visibility": 1.0,
}

GLOBAL_DEFAULTS = {"seed": 0, "format": "json"}

DEFAULTS = {
    "overlap": {
        "theta": [0.0, 0.0, 0.0],
        "phi": [0.0, 0.0, 0.0],
        "n_shots": 1000,
        "batch": 0,
        "noise": NOISE_DEFAULTS,
    },
    "classify": {
        "kind": "separate",
        "dataset": "",
        "n": 200,
        "n_train": 100,
        "split_seed": 0,
        "evaluator": "exact",
        "n_shots": 1000,
        "C": 0.8,
        "resamples": 0,
        "pool": 15000,
        "noise": NOISE_DEFAULTS,
    },
    "spsa": {
        "n_targets": 10,
        "shots_per_eval": 100,
        "iterations": 500,
        "a": 1.6,
        "A": 10.0,
        "alpha": 0.602,
        "gamma": 0.101,
        "t": 0.0,
        "gradient_reps": 1,
        "noise": NOISE_DEFAULTS,
    },
    "cv-overlap": {
        "mode": "estimate",
        "state_a": {"variant": "coherent", "beta": ["0"]},
        "state_b": {"variant": "coherent", "beta": ["1"]},
        "kappa": 8.0,
        "L": 100000,
        "chi_noise": 0.0,
        "eps": 0.1,
        "delta": 0.1,
        "c": 1.0,
        "sigma_L": 1.0,
        "M_values": [1, 2, 3, 4, 5, 6],
    },
    "complexity": {
        "eps": [0.05, 0.1, 0.2],
        "delta": [1 / 3],
        "M": 1,
        "kappa": 8.0,
        "sigma_L": 1.0,
        "c": 1.0,
    },
    "calibrate": {
        "residual_scale": 3.141592653589793,
        "dc_scale": 0.0,
        "noise_std": 0.0,
        "n_points": 64,
    },
    "dataset": {
        "kind": "separate",
        "n": 200,
    },
}

# keys whose tables are free-form descriptors, validated downstream
OPAQUE = {"state_a", "state_b"}


def _merge(defaults, given, path=""):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        where = f"{path}{key}"
        if key not in defaults:
            raise ConfigurationError(f"unknown config key {where!r}")
        ref = defaults[key]
        if isinstance(ref, dict) and key not in OPAQUE:
            if not isinstance(value, dict):
                raise ConfigurationError(f"config key {where!r} must be a table")
            out[key] = _merge(ref, value, where + ".")
        elif key in OPAQUE:
            if not isinstance(value, dict):
                raise ConfigurationError(f"config key {where!r} must be a table")
            out[key] = dict(value)
        else:
            out[key] = _check_type(ref, value, where)
    return out


def _check_type(ref, value, where):
    if isinstance(ref, bool):
        ok = isinstance(value, bool)
    elif isinstance(ref, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(ref, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        value = float(value) if ok else value
    elif isinstance(ref, str):
        ok = isinstance(value, str)
    elif isinstance(ref, list):
        ok = isinstance(value, list)
    else:  # pragma: no cover
        ok = True
    if not ok:
        raise ConfigurationError(f"config key {where!r} has the wrong type: {value!r}")
    return value


def load_config(command, path=None, overrides=None):
    """Resolved config for ``command``: defaults, then the TOML file, then overrides."""
    if command not in DEFAULTS:
        raise ConfigurationError(f"unknown command {command!r}")
    defaults = {**GLOBAL_DEFAULTS, **DEFAULTS[command]}
    given = {}
    if path:
        try:
            with open(path, "rb") as fh:
                given = tomllib.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"invalid TOML in {path}: {exc}") from None
    cfg = _merge(defaults, given)
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg[key] = _check_type(defaults[key], value, key)
    if cfg["format"] not in ("csv", "json"):
        raise ConfigurationError("format must be 'csv' or 'json'")
    if not 0 <= cfg["seed"] < 2**64:
        raise ConfigurationError("seed must be an unsigned 64-bit integer")
    return cfg
