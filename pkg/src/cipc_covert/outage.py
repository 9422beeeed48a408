"""Alice-to-Bob reliability under residual self-interference."""

from __future__ import annotations

import math

from .errors import DomainError
from .model import ChannelDraw, SchemeConfig, SystemParams, check_decodable
from .specfun import e1_scaled


def sinr_at_bob(draw: ChannelDraw, cfg: SchemeConfig, sys: SystemParams) -> float:
    """SINR of Alice's signal; channel inversion makes it independent of ``g_ab``."""
    if cfg.truncated and draw.g_ab < cfg.q / cfg.p_a_max:
        raise DomainError("no transmission in this slot: g_ab below q / p_a_max")
    return cfg.q / (sys.phi * draw.p_b * draw.g_bb + sys.sigma2_b)


def eta(q: float, rate: float, p_b_max: float, sys: SystemParams) -> float:
    """Normalized SINR margin ``(q - (2^R-1) s2b) / ((2^R-1) lambda_bb phi p_b_max)``."""
    if sys.phi == 0:
        return math.inf
    need = 2.0 ** rate - 1.0
    return (q - need * sys.sigma2_b) / (need * sys.lambda_bb * sys.phi * p_b_max)


def outage_from_eta(eta_value: float) -> float:
    """``exp(-eta) + eta * Ei(-eta)`` for ``eta >= 0``."""
    if eta_value < 0:
        raise DomainError("eta must be non-negative")
    if eta_value == 0:
        return 1.0
    if math.isinf(eta_value):
        return 0.0
    if eta_value > 745:
        return 0.0
    # exp(-eta) * (1 - eta * e^eta E1(eta)) keeps large eta finite
    return max(math.exp(-eta_value) * (1.0 - eta_value * e1_scaled(eta_value)), 0.0)


def outage_probability_at(q: float, rate: float, p_b_max: float, sys: SystemParams) -> float:
    """Outage at an arbitrary ``(q, rate, p_b_max)``; raises if undecodable."""
    check_decodable(q, rate, sys)
    if sys.phi == 0:
        return 0.0
    return outage_from_eta(eta(q, rate, p_b_max, sys))


def outage_probability(cfg: SchemeConfig, sys: SystemParams) -> float:
    return outage_probability_at(cfg.q, cfg.rate, cfg.p_b_max, sys)
