"""Flat ``key = value`` configuration files.

Precedence: command-line flags > file > environment (``CGMLAB_SEED``,
``CGMLAB_THREADS``) > built-in defaults.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Malformed file, unknown key or out-of-range value."""


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.5
    n: int = 400
    replicas: int = 200
    seed: int = 1
    threads: int = 1
    length: int = 100_000
    block: int = 32

    def validate(self) -> "RunConfig":
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha: must lie in (0, 1), got {self.alpha}")
        for name in ("n", "replicas", "threads", "length", "block"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be a positive integer, got {getattr(self, name)}")
        if self.seed < 0:
            raise ConfigError(f"seed: must be non-negative, got {self.seed}")
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _cast(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}") from None


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in _TYPES:
            raise ConfigError(f"{key}: unknown configuration key")
        out[key] = _cast(key, raw)
    return out


def env_overrides(env=None) -> dict:
    env = os.environ if env is None else env
    out = {}
    if env.get("CGMLAB_SEED"):
        out["seed"] = _cast("seed", env["CGMLAB_SEED"])
    if env.get("CGMLAB_THREADS"):
        out["threads"] = _cast("threads", env["CGMLAB_THREADS"])
    return out


def load_config(path=None, overrides: dict | None = None, env=None) -> RunConfig:
    """Defaults, then environment, then the file at ``path``, then ``overrides``."""
    cfg = replace(RunConfig(), **env_overrides(env))
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        cfg = replace(cfg, **parse_config_text(p.read_text()))
    if overrides:
        unknown = set(overrides) - set(_TYPES)
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown configuration key")
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
