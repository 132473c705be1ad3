"""Flat ``key = value`` experiment configuration files.

Recognised keys::

    grid.d       = 3            # comma-separated lists
    grid.sigma   = 0, 0.25, 0.5
    grid.theta   = 0
    grid.m       = 10, 15, 20
    grid.mode    = oracle, estimate
    n            = 1000
    reps         = 2000
    level        = 0.05
    seed         = 20240101
    ade.bandwidth_scale = 1.0
    ade.round_to_grid   = true
    cells.single_class  = allow    # or "error"

Blank lines and ``#`` comments are ignored. ``grid.*`` keys are required.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ConfigError, DataError
from .harness import ExperimentGrid
from .index import AdeConfig

_REQUIRED = ("grid.d", "grid.sigma", "grid.theta", "grid.m")
_KNOWN = set(_REQUIRED) | {
    "grid.mode", "n", "reps", "level", "seed", "ade.bandwidth_scale", "ade.round_to_grid", "cells.single_class",
}


def bundled_configs() -> list[str]:
    return sorted(p.name for p in resources.files("indexcvm").joinpath("configs").iterdir()
                  if p.name.endswith(".cfg"))


def resolve_config_path(name: str | Path) -> Path:
    """Existing file path, or the name of a bundled config such as ``table1.cfg``."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name if p.name.endswith(".cfg") else f"{p.name}.cfg"
    bundled = resources.files("indexcvm").joinpath("configs", stem)
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError("<path>", f"no such config file {str(name)!r} (bundled: {', '.join(bundled_configs())})")


def parse_config_text(text: str) -> dict[str, str]:
    values = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"<line {line_no}>", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(key, "unknown key")
        if key in values:
            raise ConfigError(key, "given twice")
        values[key] = value
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError(key, "required key missing")
    return values


def _list(values, key, conv):
    try:
        items = [conv(s.strip()) for s in values[key].split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {values[key]!r}: {exc}") from None
    if not items:
        raise ConfigError(key, "empty list")
    return tuple(items)


def _scalar(values, key, conv, default):
    if key not in values:
        return default
    try:
        return conv(values[key])
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {values[key]!r}: {exc}") from None


def _bool(s):
    low = s.strip().lower()
    if low in {"1", "true", "yes", "on"}:
        return True
    if low in {"0", "false", "no", "off"}:
        return False
    raise ValueError("expected true/false")


def _policy(s):
    low = s.strip().lower()
    if low not in {"allow", "error"}:
        raise ValueError("expected 'allow' or 'error'")
    return low == "allow"


def grid_from_mapping(values: dict[str, str], *, seed: int | None = None) -> ExperimentGrid:
    def pos_int(s):
        v = int(s)
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    kwargs = dict(
        d=_list(values, "grid.d", pos_int),
        sigma=_list(values, "grid.sigma", float),
        theta=_list(values, "grid.theta", float),
        m=_list(values, "grid.m", pos_int),
        modes=_list(values, "grid.mode", str) if "grid.mode" in values else ("oracle", "estimate"),
        n=_scalar(values, "n", pos_int, 1000),
        reps=_scalar(values, "reps", pos_int, 2000),
        level=_scalar(values, "level", float, 0.05),
        seed=seed if seed is not None else _scalar(values, "seed", int, 0),
        allow_single_class=_scalar(values, "cells.single_class", _policy, True),
    )
    try:
        kwargs["ade"] = AdeConfig(
            bandwidth_scale=_scalar(values, "ade.bandwidth_scale", float, 1.0),
            round_to_grid=_scalar(values, "ade.round_to_grid", _bool, True),
        )
    except DataError as exc:
        raise ConfigError("ade.bandwidth_scale", str(exc)) from None
    if any(s < 0 for s in kwargs["sigma"]):
        raise ConfigError("grid.sigma", "sigma must be >= 0")
    if not 0.0 < kwargs["level"] < 1.0:
        raise ConfigError("level", "must lie in (0, 1)")
    bad_modes = [mo for mo in kwargs["modes"] if mo not in ("oracle", "estimate")]
    if bad_modes:
        raise ConfigError("grid.mode", f"unknown mode(s) {bad_modes}")
    return ExperimentGrid(**kwargs)


def load_grid(path, *, seed: int | None = None) -> ExperimentGrid:
    p = resolve_config_path(path)
    return grid_from_mapping(parse_config_text(p.read_text(encoding="utf-8")), seed=seed)
