"""Seeded Monte Carlo oracle for the per-slot experiment.

Simulation is at the power level: in the long-block limit the radiometer
reads the true received power, so each slot reduces to a handful of gains
and Bob's AN power.

Every estimate draws from its own Philox stream keyed by
``(seed, stream_id, purpose)`` and consumes samples in fixed-size chunks,
so results depend only on those keys and ``n_draws``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .detection import xi_star
from .errors import ConfigError
from .model import SchemeConfig, SystemParams, check_decodable

CHUNK = 1 << 18

# sub-stream tags; stable values, changing one changes published estimates
_TAG_H0 = 0
_TAG_H1 = 1
_TAG_OUTAGE = 2
_TAG_XI_BAR = 3
_TAG_NESTED = 4
_TAG_COND_C = 5


class Hypothesis(enum.Enum):
    H0 = 0
    H1 = 1


@dataclass(frozen=True)
class McConfig:
    seed: int
    n_draws: int
    stream_id: int = 0

    def __post_init__(self):
        if self.n_draws < 1:
            raise ConfigError("n_draws must be at least 1")
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= v < 2 ** 64:
                raise ConfigError(f"{name} must be a 64-bit unsigned integer, got {v!r}")

    def generator(self, tag: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, tag))
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int

    @classmethod
    def from_count(cls, hits: int, n: int) -> "McEstimate":
        p = hits / n
        return cls(mean=p, std_error=math.sqrt(p * (1.0 - p) / n), n=n)

    @classmethod
    def from_sums(cls, total: float, total_sq: float, n: int) -> "McEstimate":
        mean = total / n
        var = max(total_sq / n - mean * mean, 0.0) * n / max(n - 1, 1)
        return cls(mean=mean, std_error=math.sqrt(var / n), n=n)

    def z_score(self, reference: float) -> float:
        """Signed distance to ``reference`` in standard errors.

        The error is floored at ``1/n``: a run that sees no events cannot
        resolve probabilities below one count.
        """
        return (self.mean - reference) / max(self.std_error, 1.0 / self.n)


def _chunks(n: int):
    full, rest = divmod(n, CHUNK)
    for _ in range(full):
        yield CHUNK
    if rest:
        yield rest


def sample_exponential(rng: np.random.Generator, mean: float, size: int) -> np.ndarray:
    return rng.exponential(mean, size)


def sample_conditioned_exponential(rng: np.random.Generator, mean: float, floor: float,
                                   size: int) -> np.ndarray:
    """Exponential(``mean``) conditioned on exceeding ``floor``, by memorylessness."""
    return floor + rng.exponential(mean, size)


def sample_statistic(hypothesis: Hypothesis, g_bw, cfg: SchemeConfig, sys: SystemParams,
                     rng: np.random.Generator, size: int) -> np.ndarray:
    """Radiometer readings ``T`` for ``size`` slots.

    ``g_bw`` may be a scalar (Willie's gain fixed) or an array of length
    ``size``.  Under H1 with the truncated scheme, ``g_ab`` is drawn given
    that transmission is allowed.
    """
    p_b = rng.uniform(0.0, cfg.p_b_max, size)
    t = p_b * g_bw + sys.sigma2_w
    if hypothesis is Hypothesis.H1:
        g_aw = sample_exponential(rng, sys.lambda_aw, size)
        if cfg.truncated:
            g_ab = sample_conditioned_exponential(rng, sys.lambda_ab, cfg.q / cfg.p_a_max, size)
        else:
            g_ab = sample_exponential(rng, sys.lambda_ab, size)
        t = t + cfg.q * g_aw / g_ab
    return t


def simulate_detection(tau: float, hypothesis: Hypothesis, g_bw: float, cfg: SchemeConfig,
                       sys: SystemParams, mc: McConfig) -> McEstimate:
    """Estimate ``P[T > tau | hypothesis]``.

    Under H0 this is the false-alarm rate; under H1 it is one minus the
    miss-detection rate.
    """
    tag = _TAG_H0 if hypothesis is Hypothesis.H0 else _TAG_H1
    rng = mc.generator(tag)
    hits = 0
    for size in _chunks(mc.n_draws):
        hits += int(np.count_nonzero(sample_statistic(hypothesis, g_bw, cfg, sys, rng, size) > tau))
    return McEstimate.from_count(hits, mc.n_draws)


def simulate_miss_detection(tau: float, g_bw: float, cfg: SchemeConfig, sys: SystemParams,
                            mc: McConfig) -> McEstimate:
    above = simulate_detection(tau, Hypothesis.H1, g_bw, cfg, sys, mc)
    return McEstimate(1.0 - above.mean, above.std_error, above.n)


@dataclass(frozen=True)
class McCurve:
    alphas: np.ndarray
    betas: np.ndarray
    xis: np.ndarray
    std_errors: np.ndarray
    n: int


def _exceed_counts(hypothesis, taus, g_bw, cfg, sys, mc, tag):
    rng = mc.generator(tag)
    counts = np.zeros(len(taus), dtype=np.int64)
    for size in _chunks(mc.n_draws):
        t = np.sort(sample_statistic(hypothesis, g_bw, cfg, sys, rng, size))
        counts += size - np.searchsorted(t, taus, side="right")
    return counts


def simulate_detection_curve(taus, g_bw: float, cfg: SchemeConfig, sys: SystemParams,
                             mc: McConfig) -> McCurve:
    """MC estimates of alpha, beta and xi on a threshold grid.

    One batch of statistics per hypothesis serves every threshold; the two
    hypotheses use independent streams, so the standard errors add in
    quadrature.  Draws match :func:`simulate_detection` at each threshold.
    """
    taus = np.asarray(taus, dtype=float)
    n = mc.n_draws
    a = _exceed_counts(Hypothesis.H0, taus, g_bw, cfg, sys, mc, _TAG_H0) / n
    b = 1.0 - _exceed_counts(Hypothesis.H1, taus, g_bw, cfg, sys, mc, _TAG_H1) / n
    se = np.sqrt((a * (1 - a) + b * (1 - b)) / n)
    return McCurve(alphas=a, betas=b, xis=a + b, std_errors=se, n=n)


def simulate_outage(cfg: SchemeConfig, sys: SystemParams, mc: McConfig) -> McEstimate:
    """Estimate ``P[log2(1 + SINR) <= R]``; equality counts as outage."""
    check_decodable(cfg.q, cfg.rate, sys)
    need = 2.0 ** cfg.rate - 1.0
    rng = mc.generator(_TAG_OUTAGE)
    hits = 0
    for size in _chunks(mc.n_draws):
        p_b = rng.uniform(0.0, cfg.p_b_max, size)
        g_bb = sample_exponential(rng, sys.lambda_bb, size)
        sinr = cfg.q / (sys.phi * p_b * g_bb + sys.sigma2_b)
        hits += int(np.count_nonzero(sinr <= need))
    return McEstimate.from_count(hits, mc.n_draws)


def simulate_condition_c(cfg: SchemeConfig, sys: SystemParams, mc: McConfig) -> McEstimate:
    """Fraction of unconditioned ``g_ab`` draws that permit transmission."""
    rng = mc.generator(_TAG_COND_C)
    floor = cfg.q / cfg.p_a_max if cfg.truncated else 0.0
    hits = 0
    for size in _chunks(mc.n_draws):
        hits += int(np.count_nonzero(sample_exponential(rng, sys.lambda_ab, size) >= floor))
    return McEstimate.from_count(hits, mc.n_draws)


def simulate_xi_bar(q: float, cfg: SchemeConfig, sys: SystemParams, mc: McConfig,
                    mode: str = "hybrid") -> McEstimate:
    """Estimate the expected minimum total error over ``g_bw``.

    ``hybrid`` averages the analytic ``xi_star`` over sampled ``g_bw``.
    ``nested`` is analytics-free: for each ``g_bw`` it runs one H0 and one
    H1 slot against the knee ``nu`` and scores the two error indicators.
    """
    cfg = cfg.with_(q=q)
    total = total_sq = 0.0
    if mode == "hybrid":
        rng = mc.generator(_TAG_XI_BAR)
        for size in _chunks(mc.n_draws):
            g = sample_exponential(rng, sys.lambda_bw, size)
            v = xi_star(g, cfg, sys)
            total += float(v.sum())
            total_sq += float((v * v).sum())
    elif mode == "nested":
        rng = mc.generator(_TAG_NESTED)
        for size in _chunks(mc.n_draws):
            g = sample_exponential(rng, sys.lambda_bw, size)
            nu = cfg.p_b_max * g + sys.sigma2_w
            t0 = sample_statistic(Hypothesis.H0, g, cfg, sys, rng, size)
            t1 = sample_statistic(Hypothesis.H1, g, cfg, sys, rng, size)
            v = (t0 > nu).astype(float) + (t1 <= nu)
            total += float(v.sum())
            total_sq += float((v * v).sum())
    else:
        raise ConfigError(f"unknown mode {mode!r}; use 'hybrid' or 'nested'")
    return McEstimate.from_sums(total, total_sq, mc.n_draws)
