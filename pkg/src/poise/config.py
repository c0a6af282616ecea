"""Engine configuration: all tunables in one place, loaded from TOML.

Every threshold, window length, weight, and calibration constant used by the
pipeline lives here. Values are range-checked at load; a bad file is rejected
with the offending key named. The config is immutable after load.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .scoring import Weights

CONFIG_VERSION = 1

_DEFAULT_RESOURCE = "default_config.toml"


@dataclass(frozen=True)
class EngineConfig:
    ipd_meters: float = 0.063
    calibration_frames: int = 30
    report_every: int = 1
    scale_smoothing: float = 0.2

    blink_close_threshold: float = 0.21
    blink_open_threshold: float = 0.25
    min_blink_frames: int = 2
    blink_window_ms: int = 60_000

    window_span_ms: int = 10_000
    rate_floor_ms: int = 10_000

    head_deviation_deg: float = 10.0

    gaze_shift_threshold: float = 0.15
    gaze_smoothing_frames: int = 3

    lip_activity_delta: float = 0.002

    smile_lar_threshold: float = 1.5
    smile_baseline_relative: bool = False
    smile_baseline_factor: float = 1.15
    smile_global_multiplier: bool = False

    weights: Weights = field(default_factory=Weights)

    def validate(self) -> None:
        def positive(name, value, integer=False):
            if integer and not isinstance(value, int):
                raise ConfigError(f"{name}: expected integer, got {value!r}")
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name}: must be finite and > 0, got {value!r}")

        positive("session.ipd_meters", self.ipd_meters)
        positive("session.calibration_frames", self.calibration_frames, integer=True)
        positive("session.report_every", self.report_every, integer=True)
        if not 0 < self.scale_smoothing <= 1:
            raise ConfigError(
                f"session.scale_smoothing: must be in (0, 1], got {self.scale_smoothing!r}"
            )
        positive("blink.close_threshold", self.blink_close_threshold)
        positive("blink.open_threshold", self.blink_open_threshold)
        if self.blink_close_threshold >= self.blink_open_threshold:
            raise ConfigError(
                "blink.close_threshold: must be below blink.open_threshold "
                f"({self.blink_close_threshold!r} >= {self.blink_open_threshold!r})"
            )
        positive("blink.min_blink_frames", self.min_blink_frames, integer=True)
        positive("blink.window_ms", self.blink_window_ms, integer=True)
        positive("windows.span_ms", self.window_span_ms, integer=True)
        positive("windows.rate_floor_ms", self.rate_floor_ms, integer=True)
        positive("head.deviation_deg", self.head_deviation_deg)
        positive("gaze.shift_threshold", self.gaze_shift_threshold)
        positive("gaze.smoothing_frames", self.gaze_smoothing_frames, integer=True)
        positive("lip.activity_delta", self.lip_activity_delta)
        positive("smile.lar_threshold", self.smile_lar_threshold)
        positive("smile.baseline_factor", self.smile_baseline_factor)


# (section, key) in the TOML file -> EngineConfig field name.
_KEY_MAP: dict[tuple[str, str], str] = {
    ("session", "ipd_meters"): "ipd_meters",
    ("session", "calibration_frames"): "calibration_frames",
    ("session", "report_every"): "report_every",
    ("session", "scale_smoothing"): "scale_smoothing",
    ("blink", "close_threshold"): "blink_close_threshold",
    ("blink", "open_threshold"): "blink_open_threshold",
    ("blink", "min_blink_frames"): "min_blink_frames",
    ("blink", "window_ms"): "blink_window_ms",
    ("windows", "span_ms"): "window_span_ms",
    ("windows", "rate_floor_ms"): "rate_floor_ms",
    ("head", "deviation_deg"): "head_deviation_deg",
    ("gaze", "shift_threshold"): "gaze_shift_threshold",
    ("gaze", "smoothing_frames"): "gaze_smoothing_frames",
    ("lip", "activity_delta"): "lip_activity_delta",
    ("smile", "lar_threshold"): "smile_lar_threshold",
    ("smile", "baseline_relative"): "smile_baseline_relative",
    ("smile", "baseline_factor"): "smile_baseline_factor",
    ("smile", "global_multiplier"): "smile_global_multiplier",
}

_BOOL_KEYS = {"smile_baseline_relative", "smile_global_multiplier"}
_INT_KEYS = {
    "calibration_frames",
    "report_every",
    "min_blink_frames",
    "blink_window_ms",
    "window_span_ms",
    "rate_floor_ms",
    "gaze_smoothing_frames",
}


def config_from_dict(data: dict) -> EngineConfig:
    """Build and validate an EngineConfig from decoded TOML data."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table")
    data = dict(data)
    version = data.pop("version", None)
    if version != CONFIG_VERSION:
        raise ConfigError(f"version: must be {CONFIG_VERSION}, got {version!r}")

    overrides: dict[str, object] = {}
    weight_values: dict[str, float] = {}
    for section, table in data.items():
        if not isinstance(table, dict):
            raise ConfigError(f"{section}: expected a table")
        if section == "weights":
            for name, value in table.items():
                if name not in Weights.__dataclass_fields__:
                    raise ConfigError(f"weights.{name}: unknown channel")
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"weights.{name}: must be a number, got {value!r}")
                if not math.isfinite(value) or value < 0:
                    raise ConfigError(f"weights.{name}: must be finite and >= 0, got {value!r}")
                weight_values[name] = float(value)
            continue
        for key, value in table.items():
            field_name = _KEY_MAP.get((section, key))
            if field_name is None:
                raise ConfigError(f"{section}.{key}: unknown key")
            if field_name in _BOOL_KEYS:
                if not isinstance(value, bool):
                    raise ConfigError(f"{section}.{key}: must be a boolean, got {value!r}")
            elif field_name in _INT_KEYS:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"{section}.{key}: must be an integer, got {value!r}")
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"{section}.{key}: must be a number, got {value!r}")
                value = float(value)
            overrides[field_name] = value

    config = EngineConfig(**overrides)
    if weight_values:
        try:
            config = replace(config, weights=Weights(**{**Weights().as_dict(), **weight_values}))
        except Exception as e:
            raise ConfigError(f"weights: {e}") from e
    config.validate()
    return config


def load_config(path: str | Path | None = None) -> EngineConfig:
    """Load a config file, or the packaged defaults when no path is given."""
    if path is None:
        text = resources.files("poise.data").joinpath(_DEFAULT_RESOURCE).read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML: {e}") from e
    return config_from_dict(data)


def default_config() -> EngineConfig:
    config = EngineConfig()
    config.validate()
    return config


def describe(config: EngineConfig) -> dict:
    """Flat snapshot of every tunable, for logging and the bench report."""
    out = {}
    for f in fields(config):
        if f.name == "weights":
            out["weights"] = config.weights.as_dict()
        else:
            out[f.name] = getattr(config, f.name)
    return out
