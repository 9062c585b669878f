"""JSON configuration documents mapped onto the parameter dataclasses.

Every block is optional; missing keys take the library defaults, unknown keys
are rejected. ``echo`` produces the fully-populated document, and loading an
echo reproduces identical parameters.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, KinematicsError
from .gait import GaitParams, StandParams, SwimWaveParams
from .model import RobotModel
from .sim import FaultSpec, SimParams

ENV_VAR = "CROC_KIN_CONFIG"

DEFAULT_FAULTS = (
    FaultSpec("LQ", "rotational"),
    FaultSpec("RH", "rotational"),
    FaultSpec("LQ", "pitching"),
    FaultSpec("RH", "pitching"),
)


@dataclass(frozen=True)
class ScenarioSettings:
    duration: float = 8.0
    faults: tuple = DEFAULT_FAULTS
    swim_stations: int = 41
    swim_times: int = 50

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError("scenario duration must be positive")
        if self.swim_stations < 2 or self.swim_times < 1:
            raise ConfigError("swim sampling needs >= 2 stations and >= 1 time")


@dataclass(frozen=True)
class ConfigDocument:
    robot: RobotModel = field(default_factory=RobotModel)
    gait: GaitParams = field(default_factory=GaitParams)
    sim: SimParams = field(default_factory=SimParams)
    stand: StandParams = field(default_factory=StandParams)
    swim: SwimWaveParams = field(default_factory=SwimWaveParams)
    scenario: ScenarioSettings = field(default_factory=ScenarioSettings)


def _default_of(f: dataclasses.Field):
    if f.default is not dataclasses.MISSING:
        return f.default
    return f.default_factory()


def _check_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite")
    return float(value)


def _coerce(template, value, path: str):
    """Convert JSON ``value`` to the shape of ``template`` (a default value)."""
    if dataclasses.is_dataclass(template):
        return _build(type(template), value, path)
    if isinstance(template, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if isinstance(template, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if isinstance(template, float):
        return _check_number(value, path)
    if isinstance(template, tuple):
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list, got {value!r}")
        if template and isinstance(template[0], FaultSpec):
            return tuple(_build(FaultSpec, v, f"{path}[{i}]") for i, v in enumerate(value))
        if template and len(value) != len(template):
            raise ConfigError(f"{path}: expected {len(template)} entries, got {len(value)}")
        elem = template[0] if template else 0.0
        return tuple(_coerce(elem, v, f"{path}[{i}]") for i, v in enumerate(value))
    if isinstance(template, dict):
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected an object, got {value!r}")
        unknown = set(value) - set(template)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        out = dict(template)
        for k, v in value.items():
            out[k] = _coerce(template[k], v, f"{path}.{k}")
        return out
    if isinstance(template, str):
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{path}: unsupported setting")


def _build(cls, data, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {data!r}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for name, value in data.items():
        f = fields[name]
        if f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
            # required string fields (fault specs)
            if not isinstance(value, str):
                raise ConfigError(f"{path}.{name}: expected a string, got {value!r}")
            kwargs[name] = value
        else:
            kwargs[name] = _coerce(_default_of(f), value, f"{path}.{name}")
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (KinematicsError, ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_config(data: dict) -> ConfigDocument:
    return _build(ConfigDocument, data, "config")


def _plain(value):
    if dataclasses.is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def echo(doc: ConfigDocument) -> dict:
    """Fully-populated JSON-ready form of ``doc``."""
    return _plain(doc)


def dumps(doc: ConfigDocument) -> str:
    return json.dumps(echo(doc), indent=2, sort_keys=True)


def load_config(path: str | os.PathLike | None = None) -> ConfigDocument:
    """Read a config file; falls back to $CROC_KIN_CONFIG, then to defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return ConfigDocument()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)
