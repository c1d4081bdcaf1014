"""Validated run configuration shared by the CLI and the verification suites."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .data import Datum, datum_from_json
from .quadrature import NODES_PER_PERIOD

T_CAP = {1: 1e6, 2: 1e6, 3: 1e5}


class ConfigError(ValueError):
    """Invalid configuration (CLI exit code 2)."""


def _gaussian_spec(dim):
    return {"kind": "gaussian", "center": [0.0] * dim, "sigma": 1.0, "amplitude": 1.0}


@dataclass(frozen=True)
class RunConfig:
    dim: int = 3
    gamma: float = 0.0
    u0: object = None
    u1: object = None
    t_min: float = 1e2
    t_max: float = 1e5
    t_points: int = 7
    resolution: float | None = None
    fmt: str = "json"
    out: str | None = None
    only: str | None = None
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {self.dim}")
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise ConfigError("gamma must be a finite number >= 0")
        if self.t_min < 1:
            raise ConfigError("t_min must be >= 1")
        if self.t_max <= self.t_min:
            raise ConfigError("t_max must exceed t_min")
        if self.t_max > T_CAP[self.dim]:
            raise ConfigError(f"t_max {self.t_max:g} exceeds the resolution budget {T_CAP[self.dim]:g} for n={self.dim}")
        if self.t_points < 4:
            raise ConfigError("need at least 4 t points for rate fits")
        if math.log10(self.t_max / self.t_min) < 2 - 1e-9:
            raise ConfigError("t grid must span at least two decades")
        if self.fmt not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.resolution is not None:
            floor = NODES_PER_PERIOD * self.t_max / (2 * math.pi)
            if self.resolution < floor:
                raise ConfigError(
                    f"resolution {self.resolution:g}/unit is below the oscillation floor {floor:g}/unit at t_max"
                )
        for name in ("u0", "u1"):
            spec = getattr(self, name)
            if spec is None:
                object.__setattr__(self, name, _gaussian_spec(self.dim))
            elif isinstance(spec, str):
                text = spec if spec.lstrip().startswith(("{", "[")) else Path(spec).read_text()
                object.__setattr__(self, name, json.loads(text))
            try:
                datum_from_json(getattr(self, name), self.dim)
            except (ValueError, TypeError, KeyError) as exc:
                raise ConfigError(f"bad {name} spec: {exc}") from exc

    @property
    def data(self) -> tuple[Datum, Datum]:
        return datum_from_json(self.u0, self.dim), datum_from_json(self.u1, self.dim)

    @property
    def t_grid(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.t_points)

    @property
    def grid_base(self) -> float:
        return 256.0 if self.resolution is None else float(self.resolution)

    def echo(self) -> dict:
        d = asdict(self)
        for k in ("out", "fmt", "workers", "extra"):
            d.pop(k)
        return d


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge a JSON config file with command-line overrides (``None`` means unset)."""
    base = {}
    if path:
        try:
            base = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(base) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    base.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**base)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc)) from exc
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
