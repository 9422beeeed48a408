"""Willie's radiometer: false alarm, miss detection and minimum total error.

Willie knows ``g_bw = |h_bw|^2`` for the slot and compares the received
power ``T`` against a threshold ``tau``.  Under H0 ``T = p_b g_bw + sigma2_w``
with ``p_b ~ U[0, p_b_max]``, so ``T`` never exceeds the knee
``nu = p_b_max g_bw + sigma2_w`` and the optimal threshold is ``nu`` itself.

Branch boundaries ``tau = sigma2_w`` and ``tau = nu`` belong to the middle
branch.  Functions broadcast over numpy arrays of ``tau`` (or ``g_bw``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import SchemeConfig, SystemParams
from .specfun import ei_diff_scaled

_EI_ARG_FLOOR = 1e-300


@dataclass(frozen=True)
class DetectorContext:
    g_bw: float
    nu: float

    def __post_init__(self):
        if not self.g_bw > 0:
            raise DomainError("g_bw must be positive")


def make_context(g_bw: float, cfg: SchemeConfig, sys: SystemParams) -> DetectorContext:
    return DetectorContext(g_bw=g_bw, nu=cfg.p_b_max * g_bw + sys.sigma2_w)


@dataclass(frozen=True)
class DetectionCurve:
    taus: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    xis: np.ndarray
    tau_star: float
    xi_star: float


def _ret(out, scalar):
    return float(out) if scalar else out


def _x_minus_log1p(x):
    """``x - log(1 + x)`` without cancellation for small ``x``."""
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.reshape(-1)
    out = x - np.log1p(x)
    small = np.abs(x) < 1e-2
    if np.any(small):
        xs = x[small]
        # alternating series: x^2/2 - x^3/3 + x^4/4 - ...
        acc = np.zeros_like(xs)
        power = xs * xs
        for k in range(2, 12):
            acc += (-1) ** k * power / k
            power = power * xs
        out[small] = acc
    return out.reshape(shape)


def false_alarm(tau, ctx: DetectorContext, cfg: SchemeConfig, sys: SystemParams):
    """``P[T > tau | H0]``; identical for both schemes."""
    tau_arr = np.asarray(tau, dtype=float)
    # written against nu so that alpha(nu) is exactly zero
    lin = np.clip((ctx.nu - tau_arr) / (cfg.p_b_max * ctx.g_bw), 0.0, 1.0)
    out = np.where(tau_arr < sys.sigma2_w, 1.0, np.where(tau_arr > ctx.nu, 0.0, lin))
    return _ret(out, tau_arr.ndim == 0)


def _trunc_constants(q, g_bw, cfg, sys):
    a = q / (cfg.p_a_max * sys.lambda_ab)
    if a < _EI_ARG_FLOOR:
        raise DomainError("Ei argument too close to the singularity at 0 (q -> 0)")
    k = q * sys.lambda_aw / (cfg.p_b_max * sys.lambda_ab * g_bw)
    return a, k


def miss_detection_truncated(tau, ctx: DetectorContext, cfg: SchemeConfig, sys: SystemParams):
    """``P[T <= tau | H1, C]`` for the truncated policy.

    Alice's power ``q / g_ab`` is drawn conditioned on ``g_ab >= q / p_a_max``,
    which turns the ratio ``g_aw / g_ab`` into an Ei-valued CDF.
    """
    if not cfg.truncated:
        raise DomainError("miss_detection_truncated needs the truncated scheme")
    tau_arr = np.asarray(tau, dtype=float)
    a, k = _trunc_constants(cfg.q, ctx.g_bw, cfg, sys)
    scale = cfg.p_a_max * sys.lambda_aw
    out = np.zeros(tau_arr.shape)

    mid = (tau_arr >= sys.sigma2_w) & (tau_arr <= ctx.nu)
    s = tau_arr[mid] - sys.sigma2_w
    out[mid] = s / (cfg.p_b_max * ctx.g_bw) - k * ei_diff_scaled(a, s / scale)

    high = tau_arr > ctx.nu
    c = (tau_arr[high] - ctx.nu) / scale
    width = cfg.p_b_max * ctx.g_bw / scale
    out[high] = 1.0 - k * np.exp(-c) * ei_diff_scaled(a + c, width)
    return _ret(np.clip(out, 0.0, 1.0), tau_arr.ndim == 0)


def miss_detection_conventional(tau, ctx: DetectorContext, cfg: SchemeConfig, sys: SystemParams):
    """``P[T <= tau | H1]`` with untruncated channel inversion."""
    if cfg.truncated:
        raise DomainError("miss_detection_conventional needs the conventional scheme")
    tau_arr = np.asarray(tau, dtype=float)
    kk = cfg.q * sys.lambda_aw / sys.lambda_ab
    spread = cfg.p_b_max * ctx.g_bw
    out = np.zeros(tau_arr.shape)

    mid = (tau_arr >= sys.sigma2_w) & (tau_arr <= ctx.nu)
    s = tau_arr[mid] - sys.sigma2_w
    out[mid] = kk * _x_minus_log1p(s / kk) / spread

    high = tau_arr > ctx.nu
    out[high] = 1.0 - kk / spread * np.log1p(spread / (tau_arr[high] + kk - ctx.nu))
    return _ret(np.clip(out, 0.0, 1.0), tau_arr.ndim == 0)


def miss_detection(tau, ctx: DetectorContext, cfg: SchemeConfig, sys: SystemParams):
    if cfg.truncated:
        return miss_detection_truncated(tau, ctx, cfg, sys)
    return miss_detection_conventional(tau, ctx, cfg, sys)


def total_error(tau, ctx: DetectorContext, cfg: SchemeConfig, sys: SystemParams):
    return false_alarm(tau, ctx, cfg, sys) + miss_detection(tau, ctx, cfg, sys)


def optimal_threshold(ctx: DetectorContext) -> float:
    """The error-minimizing threshold: the knee ``nu`` (both schemes)."""
    return ctx.nu


def xi_star(g_bw, cfg: SchemeConfig, sys: SystemParams, q: float | None = None):
    """Minimum total error ``alpha(nu) + beta(nu)`` as a function of ``g_bw``.

    Broadcasts over ``g_bw``; ``q`` overrides ``cfg.q`` so that optimizers can
    sweep the received-power target without rebuilding configs.  Does not
    depend on ``sigma2_w``.
    """
    q = cfg.q if q is None else q
    g = np.asarray(g_bw, dtype=float)
    if np.any(~(g > 0)):
        raise DomainError("xi_star requires g_bw > 0")
    if cfg.truncated:
        a, k = _trunc_constants(q, g, cfg, sys)
        out = 1.0 - k * ei_diff_scaled(a, cfg.p_b_max * g / (cfg.p_a_max * sys.lambda_aw))
    else:
        x = cfg.p_b_max * sys.lambda_ab * g / (q * sys.lambda_aw)
        out = _x_minus_log1p(x) / x
    return _ret(np.clip(out, 0.0, 1.0), g.ndim == 0)


def detection_curve(taus, g_bw: float, cfg: SchemeConfig, sys: SystemParams) -> DetectionCurve:
    ctx = make_context(g_bw, cfg, sys)
    taus = np.asarray(taus, dtype=float)
    alphas = np.atleast_1d(false_alarm(taus, ctx, cfg, sys))
    betas = np.atleast_1d(miss_detection(taus, ctx, cfg, sys))
    return DetectionCurve(
        taus=taus,
        alphas=alphas,
        betas=betas,
        xis=alphas + betas,
        tau_star=optimal_threshold(ctx),
        xi_star=xi_star(g_bw, cfg, sys),
    )
