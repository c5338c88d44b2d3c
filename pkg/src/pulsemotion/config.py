"""Pipeline configuration: every tunable in one strict record.

Defaults follow the published method: 10x interpolation, 0.75-5 Hz 5th-order
band-pass, five components, pattern anchors at the 2nd/8th/16th seconds,
MDTW stride of 5 samples. Unknown keys and out-of-range values are rejected
with the offending key named.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class PipelineConfig:
    band_low_hz: float = 0.75
    band_high_hz: float = 5.0
    band_order: int = 5
    interpolation_factor: int = 10
    n_components: int = 5
    seed: int = 0
    fastica_max_iter: int = 1000
    fastica_tol: float = 1e-5
    jade_threshold: float = 1e-6
    jade_max_sweeps: int = 100
    shibbs_threshold: float | None = None   # None -> 1e-6/sqrt(T)
    shibbs_max_passes: int = 1000
    pattern_anchors_seconds: tuple = (2.0, 8.0, 16.0)
    pattern_window_seconds: float = 1.0
    mdtw_step: int = 5
    peak_threshold_quantile: float = 0.40
    peak_min_separation_seconds: float = 0.33
    bad_component_mode: str = "intent"      # or "literal"
    bad_component_tolerance: float = 0.0
    pulse_count_mode: str = "intervals"     # or "literal"
    skewness_mode: str = "absolute"         # or "signed"
    ssa_enabled: bool = False
    ssa_window: int | None = None           # samples; None -> derived default

    def __post_init__(self):
        _check(self.band_order >= 1, "band_order", "must be >= 1")
        _check(0.0 < self.band_low_hz < self.band_high_hz,
               "band_low_hz", "must satisfy 0 < low < high")
        _check(self.interpolation_factor >= 1, "interpolation_factor",
               "must be >= 1")
        _check(self.n_components >= 1, "n_components", "must be >= 1")
        _check(self.fastica_max_iter >= 1, "fastica_max_iter", "must be >= 1")
        _check(self.fastica_tol > 0, "fastica_tol", "must be positive")
        _check(self.jade_threshold > 0, "jade_threshold", "must be positive")
        _check(self.jade_max_sweeps >= 1, "jade_max_sweeps", "must be >= 1")
        _check(self.shibbs_threshold is None or self.shibbs_threshold > 0,
               "shibbs_threshold", "must be positive (or null for scaled)")
        _check(self.shibbs_max_passes >= 1, "shibbs_max_passes", "must be >= 1")
        _check(len(self.pattern_anchors_seconds) >= 1,
               "pattern_anchors_seconds", "needs at least one anchor")
        _check(all(a >= 0 for a in self.pattern_anchors_seconds),
               "pattern_anchors_seconds", "anchors must be non-negative")
        _check(self.pattern_window_seconds > 0, "pattern_window_seconds",
               "must be positive")
        _check(self.mdtw_step >= 1, "mdtw_step", "must be >= 1")
        _check(0.0 < self.peak_threshold_quantile <= 1.0,
               "peak_threshold_quantile", "must lie in (0, 1]")
        _check(self.peak_min_separation_seconds >= 0,
               "peak_min_separation_seconds", "must be non-negative")
        _check(self.bad_component_mode in ("intent", "literal"),
               "bad_component_mode", "must be 'intent' or 'literal'")
        _check(self.bad_component_tolerance >= 0, "bad_component_tolerance",
               "must be non-negative")
        _check(self.pulse_count_mode in ("intervals", "literal"),
               "pulse_count_mode", "must be 'intervals' or 'literal'")
        _check(self.skewness_mode in ("absolute", "signed"),
               "skewness_mode", "must be 'absolute' or 'signed'")
        _check(self.ssa_window is None or self.ssa_window >= 2,
               "ssa_window", "must be >= 2 samples")
        object.__setattr__(self, "pattern_anchors_seconds",
                           tuple(float(a) for a in self.pattern_anchors_seconds))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["pattern_anchors_seconds"] = list(d["pattern_anchors_seconds"])
        return d

    def replace(self, **kwargs) -> "PipelineConfig":
        return from_dict({**self.to_dict(), **kwargs})


def _check(cond: bool, key: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"config key '{key}' {message}")


_FIELDS = {f.name: f for f in dataclasses.fields(PipelineConfig)}


def from_dict(values: dict) -> PipelineConfig:
    unknown = set(values) - set(_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    coerced = {}
    for key, val in values.items():
        try:
            coerced[key] = _coerce(key, val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key '{key}': {exc}") from exc
    return PipelineConfig(**coerced)


def _coerce(key: str, val):
    if key == "pattern_anchors_seconds":
        return tuple(float(a) for a in val)
    if key == "ssa_window":
        return None if val is None else int(val)
    if key == "shibbs_threshold":
        return None if val is None else float(val)
    if key == "ssa_enabled":
        if not isinstance(val, bool):
            raise ValueError(f"expected a boolean, got {val!r}")
        return val
    kind = _FIELDS[key].type
    if kind == "int":
        if isinstance(val, float) and not val.is_integer():
            raise ValueError(f"expected an integer, got {val!r}")
        return int(val)
    if kind == "float":
        return float(val)
    if kind == "str":
        return str(val)
    return val


def load_config(path: str | os.PathLike) -> PipelineConfig:
    """Read a JSON config file; keys not present fall back to defaults."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            values = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(values, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return from_dict(values)


def dump_config(cfg: PipelineConfig, path: str | os.PathLike) -> None:
    """Echo the effective configuration (defaults merged) as JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
