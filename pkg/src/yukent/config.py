"""Run configuration: flat ``key = value`` files with ``#`` comments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .params import DomainError, PhysicalParams

MODES = ("paper", "derived", "both")
REQUIRED_KEYS = ("g", "m", "B_r")
_FLOAT_KEYS = ("g", "m", "B_r", "mu", "hbar")
_INT_KEYS = ("n_max", "y_order", "theta_order", "k_points", "rho_points")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams = field(default_factory=PhysicalParams)
    alpha_values: tuple = (0.0,)
    n_max: int = 60
    y_order: int = 200
    theta_order: int = 100
    k_points: int = 4096
    rho_points: int = 4001
    mode: str = "both"
    out_dir: Path = Path("yukent-out")

    def __post_init__(self):
        for a in self.alpha_values:
            if not math.isfinite(a) or a < 0:
                raise ConfigError(f"alpha values must be finite and >= 0, got {a}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for key in _INT_KEYS:
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be a positive integer")


def parse_number(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite, got {text!r}")
    return value


def parse_alpha_list(text: str, key: str = "alpha") -> tuple:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"{key}: empty list")
    return tuple(parse_number(key, t) for t in items)


def parse_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def from_mapping(entries: dict, require: bool = True) -> RunConfig:
    if require:
        for key in REQUIRED_KEYS:
            if key not in entries:
                raise ConfigError(f"missing required key {key!r}")
    known = set(_FLOAT_KEYS) | set(_INT_KEYS) | {"alpha", "mode", "out"}
    for key in entries:
        if key not in known:
            raise ConfigError(f"unknown key {key!r}")
    phys = {k: parse_number(k, entries[k]) for k in _FLOAT_KEYS if k in entries}
    kw = {}
    for key in _INT_KEYS:
        if key in entries:
            v = parse_number(key, entries[key])
            if v != int(v):
                raise ConfigError(f"{key} must be an integer, got {entries[key]!r}")
            kw[key] = int(v)
    if "alpha" in entries:
        kw["alpha_values"] = parse_alpha_list(entries["alpha"])
    if "mode" in entries:
        kw["mode"] = entries["mode"]
    if "out" in entries:
        kw["out_dir"] = Path(entries["out"])
    try:
        params = PhysicalParams(**phys)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(params=params, **kw)


def load(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return from_mapping(parse_text(text))


def with_overrides(cfg: RunConfig, **changes) -> RunConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(cfg, **changes) if changes else cfg
