"""Config files and sweep specifications for the command-line front end.

A config file is plain ``key = value`` lines; ``#`` starts a comment.
Powers and noise levels are in dB, ``q`` is linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .model import Scheme, SchemeConfig, SystemParams, db_to_linear

SWEEP_VARIABLES = ("tau", "q", "p_b_max_db", "p_a_max_db", "epsilon")
SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class Settings:
    """Raw config values, in the units of the file format."""

    scheme: str = "conventional"
    q: float = 1.0
    p_a_max_db: float | None = None
    p_b_max_db: float = 0.0
    rate: float = 0.5
    epsilon: float = 0.1
    sigma2_b_db: float = 0.0
    sigma2_w_db: float = 0.0
    phi: float = 0.1
    lambda_ab: float = 1.0
    lambda_aw: float = 1.0
    lambda_bw: float = 1.0
    lambda_bb: float = 1.0

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_mapping(cls, values: dict[str, str | float]) -> "Settings":
        unknown = set(values) - set(cls.keys())
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        parsed = {}
        for key, raw in values.items():
            if key == "scheme":
                parsed[key] = str(raw).strip().lower()
                continue
            try:
                parsed[key] = float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
            if not math.isfinite(parsed[key]):
                raise ConfigError(f"{key}: value must be finite")
        return cls(**parsed)

    def with_value(self, key: str, value) -> "Settings":
        return replace(self, **{key: value})

    def build(self) -> tuple[SchemeConfig, SystemParams]:
        """Convert to linear-unit model objects; raises :class:`ConfigError`."""
        try:
            scheme = Scheme(self.scheme)
        except ValueError:
            raise ConfigError(f"scheme must be 'truncated' or 'conventional', not {self.scheme!r}") from None
        if scheme is Scheme.TRUNCATED and self.p_a_max_db is None:
            raise ConfigError("p_a_max_db is required for the truncated scheme")
        sys = SystemParams(
            lambda_ab=self.lambda_ab,
            lambda_aw=self.lambda_aw,
            lambda_bw=self.lambda_bw,
            lambda_bb=self.lambda_bb,
            sigma2_b=db_to_linear(self.sigma2_b_db),
            sigma2_w=db_to_linear(self.sigma2_w_db),
            phi=self.phi,
        )
        cfg = SchemeConfig(
            scheme=scheme,
            q=self.q,
            p_b_max=db_to_linear(self.p_b_max_db),
            rate=self.rate,
            epsilon=self.epsilon,
            p_a_max=None if self.p_a_max_db is None else db_to_linear(self.p_a_max_db),
        )
        return cfg, sys


def parse_config_text(text: str) -> Settings:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return Settings.from_mapping(values)


def load_config(path: str | Path) -> Settings:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if self.spacing not in SPACINGS:
            raise ConfigError(f"sweep spacing must be one of {SPACINGS}")
        if self.points < 2:
            raise ConfigError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")
        if self.spacing == "log" and not self.start > 0:
            raise ConfigError("log spacing needs a positive start")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """Parse ``VAR:START:STOP:POINTS:SPACING`` (spacing optional)."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ConfigError(f"bad sweep {text!r}; expected VAR:START:STOP:POINTS[:SPACING]")
        try:
            start, stop, points = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise ConfigError(f"bad sweep numbers in {text!r}") from None
        spacing = parts[4] if len(parts) == 5 else "linear"
        return cls(parts[0], start, stop, points, spacing)

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)
