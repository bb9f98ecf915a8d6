"""Run configuration: presets, JSON config files, and object construction."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import TdemassError
from .invariant import InvariantParams
from .profiles import ConstantMass, MassProfile, QuadraticMass, TabulatedMass


class ConfigError(TdemassError, ValueError):
    """Malformed or inconsistent run configuration."""


#: Built-in parameter sets selectable by name.
PRESETS = {
    "paper-toy": {
        "mass": {"kind": "quadratic", "m0": 1.0, "b": 0.5},
        "invariant": {"alpha0": 2.0, "beta": 1.0, "gamma0": 1.0, "hbar": 1.0},
        "x0": 4.0,
        "normalize": False,
    }
}


@dataclass
class RunConfig:
    """Everything a CLI run needs; round-trips through ``to_dict``/``from_dict``."""

    mass: dict = field(default_factory=lambda: dict(PRESETS["paper-toy"]["mass"]))
    invariant: dict = field(
        default_factory=lambda: dict(PRESETS["paper-toy"]["invariant"])
    )
    x0: float = 4.0
    normalize: bool = False
    preset: str | None = None
    out: str | None = None
    format: str = "csv"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        if data.get("preset") is not None:
            cfg = cls.from_preset(data["preset"])
            cfg.preset = data["preset"]
        for key in ("mass", "invariant"):
            if key in data:
                if not isinstance(data[key], dict):
                    raise ConfigError(f"config key {key!r} must be an object")
                merged = dict(getattr(cfg, key))
                merged.update(data[key])
                setattr(cfg, key, merged)
        for key in ("x0", "normalize", "out", "format"):
            if key in data:
                setattr(cfg, key, data[key])
        if cfg.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {cfg.format!r}")
        return cfg

    @classmethod
    def from_preset(cls, name: str) -> "RunConfig":
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
        entry = PRESETS[name]
        return cls(
            mass=dict(entry["mass"]),
            invariant=dict(entry["invariant"]),
            x0=entry["x0"],
            normalize=entry["normalize"],
            preset=name,
        )

    def build_profile(self) -> MassProfile:
        return profile_from_config(self.mass)

    def build_params(self) -> InvariantParams:
        inv = self.invariant
        try:
            return InvariantParams(
                alpha0=float(inv["alpha0"]),
                beta=float(inv["beta"]),
                gamma0=float(inv["gamma0"]),
                hbar=float(inv.get("hbar", 1.0)),
            )
        except KeyError as exc:
            raise ConfigError(f"invariant config missing key {exc}") from exc


def profile_from_config(mass: dict) -> MassProfile:
    if not isinstance(mass, dict) or "kind" not in mass:
        raise ConfigError("mass config must be an object with a 'kind' key")
    kind = mass["kind"]
    try:
        if kind == "quadratic":
            return QuadraticMass(m0=float(mass["m0"]), b=float(mass["b"]))
        if kind == "constant":
            return ConstantMass(m0=float(mass["m0"]))
        if kind == "tabulated":
            if "csv" in mass:
                table = _read_mass_csv(mass["csv"])
            elif "samples" in mass:
                table = np.asarray(mass["samples"], dtype=float)
            else:
                raise ConfigError("tabulated mass needs a 'csv' path or 'samples' list")
            return TabulatedMass(table[:, 0], table[:, 1])
    except (KeyError, ValueError, IndexError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid mass config {mass!r}: {exc}") from exc
    raise ConfigError(f"unknown mass kind {kind!r}")


def _read_mass_csv(path: str) -> np.ndarray:
    """Read t,m rows; a non-numeric first line is treated as a header."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise ConfigError(f"empty mass table {path!r}")
    try:
        float(lines[0].split(",")[0])
        skip = 0
    except ValueError:
        skip = 1
    rows = [
        [float(cell) for cell in line.split(",")[:2]] for line in lines[skip:] if line.strip()
    ]
    return np.asarray(rows, dtype=float)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return RunConfig.from_dict(data)


def resolve_config(config_path: str | None = None, preset: str | None = None) -> RunConfig:
    """Precedence: config file > preset > the default (paper-toy) values."""
    if config_path is not None:
        cfg = load_config(config_path)
        if preset is not None and cfg.preset is None:
            raise ConfigError("pass either --config or --preset, not both")
        return cfg
    if preset is not None:
        return RunConfig.from_preset(preset)
    return RunConfig.from_preset("paper-toy")
