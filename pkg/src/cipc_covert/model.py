"""Value types for the link environment and a single design point.

All quantities are linear (watts, linear power gains); decibels only appear
at the CLI boundary through :func:`db_to_linear`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import ConfigError, DomainError


class Scheme(str, enum.Enum):
    TRUNCATED = "truncated"
    CONVENTIONAL = "conventional"


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise DomainError("linear_to_db requires a positive value")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SystemParams:
    """Static environment: mean channel gains, noise powers, self-interference.

    ``lambda_ba`` is not a free field: channel reciprocity ties it to
    ``lambda_ab`` (exposed as a property).
    """

    lambda_ab: float = 1.0
    lambda_aw: float = 1.0
    lambda_bw: float = 1.0
    lambda_bb: float = 1.0
    sigma2_b: float = 1.0
    sigma2_w: float = 1.0
    phi: float = 0.1

    def __post_init__(self):
        for name in ("lambda_ab", "lambda_aw", "lambda_bw", "lambda_bb", "sigma2_b", "sigma2_w"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")
        if not 0.0 <= self.phi <= 1.0:
            raise ConfigError(f"phi must lie in [0, 1], got {self.phi!r}")

    @property
    def lambda_ba(self) -> float:
        return self.lambda_ab

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SchemeConfig:
    """One design point: scheme, received-power target ``q`` and budgets.

    ``p_a_max`` is required for the truncated scheme and ignored (may be
    ``None``) for the conventional one.
    """

    scheme: Scheme
    q: float
    p_b_max: float
    rate: float
    epsilon: float
    p_a_max: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not self.q > 0:
            raise ConfigError(f"q must be positive, got {self.q!r}")
        if not self.p_b_max > 0:
            raise ConfigError(f"p_b_max must be positive, got {self.p_b_max!r}")
        if not self.rate > 0:
            raise ConfigError(f"rate must be positive, got {self.rate!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")
        if self.scheme is Scheme.TRUNCATED:
            if self.p_a_max is None or not self.p_a_max > 0:
                raise ConfigError("the truncated scheme needs a positive p_a_max")

    @property
    def truncated(self) -> bool:
        return self.scheme is Scheme.TRUNCATED

    def with_(self, **changes) -> "SchemeConfig":
        return replace(self, **changes)


def rate_threshold_q(rate: float, sys: SystemParams) -> float:
    """Smallest ``q`` for which ``rate`` is decodable without interference."""
    return (2.0 ** rate - 1.0) * sys.sigma2_b


def is_decodable(q: float, rate: float, sys: SystemParams) -> bool:
    return rate < math.log2(1.0 + q / sys.sigma2_b)


def check_decodable(q: float, rate: float, sys: SystemParams) -> None:
    """Raise unless ``rate < log2(1 + q / sigma2_b)``."""
    if not is_decodable(q, rate, sys):
        cap = math.log2(1.0 + q / sys.sigma2_b)
        raise DomainError(
            f"rate {rate} is not below the interference-free capacity {cap:.6g} "
            f"at q={q}; outage would be certain"
        )


def validate(cfg: SchemeConfig, sys: SystemParams) -> None:
    """Cross-object checks that neither dataclass can do on its own."""
    try:
        check_decodable(cfg.q, cfg.rate, sys)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class ChannelDraw:
    """One slot: instantaneous power gains ``|h_j|^2`` and Bob's AN power."""

    g_ab: float
    g_aw: float
    g_bw: float
    g_bb: float
    p_b: float

    def __post_init__(self):
        if min(self.g_ab, self.g_aw, self.g_bw, self.g_bb) < 0:
            raise DomainError("channel gains must be non-negative")
        if self.p_b < 0:
            raise DomainError("AN power must be non-negative")


@dataclass(frozen=True)
class Priors:
    pi0: float
    pi1: float

    def __post_init__(self):
        if not (0.0 <= self.pi0 <= 1.0 and 0.0 <= self.pi1 <= 1.0):
            raise DomainError("priors must lie in [0, 1]")
        if abs(self.pi0 + self.pi1 - 1.0) > 1e-12:
            raise DomainError("priors must sum to one")

    @property
    def smaller(self) -> float:
        return min(self.pi0, self.pi1)


def condition_c_probability_q(q: float, cfg: SchemeConfig, sys: SystemParams) -> float:
    """``P[g_ab >= q / p_a_max]`` at an arbitrary ``q`` (1 for conventional)."""
    if not cfg.truncated:
        return 1.0
    return math.exp(-q / (sys.lambda_ab * cfg.p_a_max))


def condition_c_probability(cfg: SchemeConfig, sys: SystemParams) -> float:
    """Probability that the truncated policy is allowed to transmit."""
    return condition_c_probability_q(cfg.q, cfg, sys)


def priors_q(q: float, cfg: SchemeConfig, sys: SystemParams) -> Priors:
    # transmit with probability 1/2 whenever transmission is possible
    pi1 = 0.5 * condition_c_probability_q(q, cfg, sys)
    return Priors(pi0=1.0 - pi1, pi1=pi1)


def priors(cfg: SchemeConfig, sys: SystemParams) -> Priors:
    return priors_q(cfg.q, cfg, sys)
