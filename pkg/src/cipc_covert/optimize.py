"""Covertness-constrained effective covert throughput (ECT).

Alice cannot see ``g_bw``, so covertness is enforced on the minimum total
error averaged over ``g_bw ~ Exp(lambda_bw)``:

    min(pi0, pi1) * xi_bar(q) >= min(pi0, pi1) - epsilon

and the objective is ``R * (1 - delta) * P_C``.  ``xi_bar`` is computed by
quadrature for both schemes; for the conventional scheme a series closed
form is available as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .detection import xi_star
from .errors import BracketError, DomainError, InfeasibleError
from .model import (
    Scheme,
    SchemeConfig,
    SystemParams,
    check_decodable,
    condition_c_probability_q,
    is_decodable,
    priors_q,
    rate_threshold_q,
)
from .outage import eta, outage_from_eta, outage_probability_at
from .search import bisect_log, boundary_log, golden_section_max
from .specfun import (
    EULER_GAMMA,
    QuadratureSpec,
    ei,
    harmonic_exp_series,
    hyper3f3_unit_params,
    integrate_semi_infinite,
)

XI_BAR_QUAD = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_subdivisions=1000)
# z = 1/phi(Q) above which the closed form loses digits to cancellation
CLOSED_FORM_Z_MAX = 20.0
SOLVER_BRACKET = (1e-6, 1e6)
SOLVER_WIDENINGS = 5
SCAN_POINTS = 200
RATE_FLOOR = 1e-3


@dataclass(frozen=True)
class EctResult:
    scheme: Scheme
    q_star: float
    r_used: float
    ect: float
    xi_bar_at_q_star: float
    constraint_slack: float
    feasible: bool = True
    r_star: float | None = None
    asymptotic_bound: float | None = None


def detection_scale(cfg: SchemeConfig, sys: SystemParams) -> float:
    """``p_b_max lambda_ab lambda_bw / lambda_aw``; the conventional error
    depends on ``q`` only through ``phi(q) = scale / q``."""
    return cfg.p_b_max * sys.lambda_ab * sys.lambda_bw / sys.lambda_aw


def _xi_bar(q, cfg, sys, spec):
    if not q > 0:
        raise DomainError("q must be positive")
    lam = sys.lambda_bw

    def integrand(y):
        return xi_star(lam * y, cfg, sys, q=q) * np.exp(-y)

    return integrate_semi_infinite(integrand, 0.0, spec or XI_BAR_QUAD)


def xi_bar_conventional(q: float, cfg: SchemeConfig, sys: SystemParams,
                        spec: QuadratureSpec | None = None) -> float:
    """Expected minimum total error over ``g_bw`` (conventional scheme)."""
    if cfg.truncated:
        cfg = cfg.with_(scheme=Scheme.CONVENTIONAL)
    return _xi_bar(q, cfg, sys, spec)


def xi_bar_truncated(q: float, cfg: SchemeConfig, sys: SystemParams,
                     spec: QuadratureSpec | None = None) -> float:
    """Expected minimum total error over ``g_bw`` (truncated scheme)."""
    if not cfg.truncated:
        raise DomainError("xi_bar_truncated needs the truncated scheme")
    return _xi_bar(q, cfg, sys, spec)


def xi_bar(q: float, cfg: SchemeConfig, sys: SystemParams,
           spec: QuadratureSpec | None = None) -> float:
    return _xi_bar(q, cfg, sys, spec)


def xi_bar_conventional_closed_form(q: float, cfg: SchemeConfig, sys: SystemParams) -> float:
    """Series closed form of the conventional ``xi_bar``.

    With ``z = 1 / phi(q)`` and ``c = gamma + ln z``::

        xi_bar = 1 - z * (pi^2/4 + c Ei(z) - c^2/2 - z 3F3(1,1,1;2,2,2;z)
                          - sum_n H_n z^n / (n n!))

    The pieces grow like ``e^z`` and cancel, so this is only offered for
    ``z <= CLOSED_FORM_Z_MAX``.
    """
    z = q / detection_scale(cfg, sys)
    if not 0 < z <= CLOSED_FORM_Z_MAX:
        raise DomainError(f"closed form restricted to 0 < 1/phi <= {CLOSED_FORM_Z_MAX}")
    c = EULER_GAMMA + math.log(z)
    inner = (math.pi ** 2 / 4.0 + c * ei(z) - 0.5 * c * c
             - z * hyper3f3_unit_params(z) - harmonic_exp_series(z))
    return 1.0 - z * inner


def constraint_slack(q: float, xi_bar_value: float, cfg: SchemeConfig, sys: SystemParams) -> float:
    """``min(pi) * xi_bar - (min(pi) - epsilon)``; non-negative when covert."""
    p = priors_q(q, cfg, sys).smaller
    return p * xi_bar_value - (p - cfg.epsilon)


@lru_cache(maxsize=256)
def _normalized_q_epsilon(epsilon: float) -> float:
    """Solve ``xi_bar = 1 - 2 epsilon`` for ``u = q / detection_scale``.

    Depends on nothing but ``epsilon``, which is what makes ``Q_eps``
    proportional to ``p_b_max``.
    """
    unit_sys = SystemParams()
    unit_cfg = SchemeConfig(Scheme.CONVENTIONAL, q=1.0, p_b_max=1.0, rate=1.0, epsilon=epsilon)
    target = 1.0 - 2.0 * epsilon

    def f(u):
        return _xi_bar(u, unit_cfg, unit_sys, XI_BAR_QUAD) - target

    lo, hi = SOLVER_BRACKET
    for _ in range(SOLVER_WIDENINGS + 1):
        flo, fhi = f(lo), f(hi)
        if flo > 0 > fhi:
            break
        if flo <= 0:
            lo /= 10.0
        if fhi >= 0:
            hi *= 10.0
    else:
        raise BracketError(f"xi_bar = {target} not bracketed on [{lo:g}, {hi:g}]")
    return bisect_log(f, lo, hi, ftol=1e-11, rtol=1e-15)


def solve_q_epsilon(cfg: SchemeConfig, sys: SystemParams) -> float:
    """Received-power target at which the conventional constraint is tight."""
    if not 0.0 < cfg.epsilon < 0.5:
        raise DomainError("solve_q_epsilon requires 0 < epsilon < 1/2")
    return _normalized_q_epsilon(float(cfg.epsilon)) * detection_scale(cfg, sys)


def ect(q: float, rate: float, cfg: SchemeConfig, sys: SystemParams) -> float:
    """Effective covert throughput ``R (1 - delta) P_C`` at ``(q, rate)``."""
    check_decodable(q, rate, sys)
    delta = outage_probability_at(q, rate, cfg.p_b_max, sys)
    return rate * (1.0 - delta) * condition_c_probability_q(q, cfg, sys)


def _rate_term(q, rate, p_b_max, sys):
    if not is_decodable(q, rate, sys):
        return 0.0
    return rate * (1.0 - outage_probability_at(q, rate, p_b_max, sys))


def best_rate(q: float, p_b_max: float, sys: SystemParams) -> tuple[float, float]:
    """Maximize ``R (1 - delta(q, R))`` over ``R``; returns ``(R*, value)``.

    Rate does not enter the covertness constraint, so it can be tuned after
    ``q``.  Returns ``(nan, 0.0)`` when not even ``RATE_FLOOR`` is decodable.
    """
    top = math.log2(1.0 + q / sys.sigma2_b) - 1e-9
    if top <= RATE_FLOOR:
        return math.nan, 0.0
    r, value = golden_section_max(lambda r: _rate_term(q, r, p_b_max, sys), RATE_FLOOR, top,
                                  tol=1e-10)
    return r, value


def max_ect_conventional(q_star: float, rate: float, p_b_max: float, sys: SystemParams) -> float:
    """``R (1 - e^{-eta} - eta Ei(-eta))`` at ``q_star``, straight from Ei."""
    if sys.phi == 0:
        return rate
    e = eta(q_star, rate, p_b_max, sys)
    if e <= 0:
        return 0.0
    return rate * (1.0 - math.exp(-e) - e * ei(-e))


def asymptotic_ect_bound(cfg: SchemeConfig, sys: SystemParams) -> float:
    """Limit of the conventional optimum ECT as ``p_b_max -> inf`` at fixed rate."""
    if cfg.truncated:
        raise DomainError("the asymptotic bound is defined for the conventional scheme")
    if sys.phi == 0:
        return cfg.rate
    # theta_eps = p_b_max / Q_eps, free of p_b_max
    theta = cfg.p_b_max / solve_q_epsilon(cfg, sys)
    eta_inf = 1.0 / ((2.0 ** cfg.rate - 1.0) * sys.lambda_bb * sys.phi * theta)
    return cfg.rate * (1.0 - outage_from_eta(eta_inf))


def optimize_conventional(cfg: SchemeConfig, sys: SystemParams,
                          optimize_rate: bool = False) -> EctResult:
    """Tight-constraint optimum: ``Q* = Q_eps`` then (optionally) best ``R``."""
    if cfg.truncated:
        cfg = cfg.with_(scheme=Scheme.CONVENTIONAL)
    q_star = solve_q_epsilon(cfg, sys)
    xb = xi_bar_conventional(q_star, cfg, sys)
    r_star = None
    if optimize_rate:
        r_star, _ = best_rate(q_star, cfg.p_b_max, sys)
        rate = r_star if not math.isnan(r_star) else cfg.rate
    else:
        rate = cfg.rate
    feasible = is_decodable(q_star, rate, sys)
    value = max_ect_conventional(q_star, rate, cfg.p_b_max, sys) if feasible else 0.0
    return EctResult(
        scheme=Scheme.CONVENTIONAL,
        q_star=q_star,
        r_used=rate,
        r_star=r_star,
        ect=value,
        xi_bar_at_q_star=xb,
        constraint_slack=constraint_slack(q_star, xb, cfg, sys),
        feasible=feasible,
        asymptotic_bound=asymptotic_ect_bound(cfg.with_(rate=rate), sys),
    )


def _truncated_scan_range(cfg, sys, optimize_rate):
    lo = 1e-6 * min(detection_scale(cfg, sys), sys.lambda_ab * cfg.p_a_max)
    if not optimize_rate:
        lo = max(lo, rate_threshold_q(cfg.rate, sys) * (1.0 + 1e-9))
    # beyond this P_C < e^-60 and nothing is left to gain
    hi = 60.0 * sys.lambda_ab * cfg.p_a_max
    return lo, hi


def optimize_truncated(cfg: SchemeConfig, sys: SystemParams, optimize_rate: bool = False,
                       scan_points: int = SCAN_POINTS, branch: str = "lowest") -> EctResult:
    """Scan-then-refine maximization of ``R (1 - delta) P_C`` over feasible ``q``.

    The objective is not monotone in ``q`` and the feasible set can split
    into several intervals, so every run of feasible scan points gets its
    boundaries bisected and its interior searched by golden section in
    ``log q``.

    Raises
    ------
    InfeasibleError
        If no scanned ``q`` satisfies the covertness constraint.
    """
    if not cfg.truncated:
        raise DomainError("optimize_truncated needs the truncated scheme")
    lo, hi = _truncated_scan_range(cfg, sys, optimize_rate)
    if not hi > lo:
        raise InfeasibleError("decodable q range is empty below the truncation cut-off")

    xi_cache: dict[float, float] = {}

    def xb(q):
        if q not in xi_cache:
            xi_cache[q] = xi_bar_truncated(q, cfg, sys)
        return xi_cache[q]

    def ok(q):
        return constraint_slack(q, xb(q), cfg, sys) >= 0.0

    rate_cache: dict[float, tuple[float, float]] = {}

    def rate_at(q):
        if q not in rate_cache:
            if optimize_rate:
                rate_cache[q] = best_rate(q, cfg.p_b_max, sys)
            else:
                rate_cache[q] = (cfg.rate, _rate_term(q, cfg.rate, cfg.p_b_max, sys))
        return rate_cache[q]

    def objective(q):
        return condition_c_probability_q(q, cfg, sys) * rate_at(q)[1]

    grid = np.geomspace(lo, hi, scan_points)
    feasible = [ok(float(q)) for q in grid]
    if not any(feasible):
        raise InfeasibleError("no scanned q satisfies the covertness constraint")

    best_q, best_val = None, -1.0
    i = 0
    while i < len(grid):
        if not feasible[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and feasible[j + 1]:
            j += 1
        left = float(grid[i]) if i == 0 else boundary_log(ok, float(grid[i]), float(grid[i - 1]))
        right = (float(grid[j]) if j == len(grid) - 1
                 else boundary_log(ok, float(grid[j]), float(grid[j + 1])))
        candidates = [(objective(float(q)), float(q)) for q in grid[i:j + 1]]
        candidates += [(objective(left), left), (objective(right), right)]
        if right > left:
            u, _ = golden_section_max(lambda t: objective(math.exp(t)),
                                      math.log(left), math.log(right), tol=1e-8)
            q_gs = math.exp(u)
            if ok(q_gs):
                candidates.append((objective(q_gs), q_gs))
        val, q = max(candidates)
        if val > best_val:
            best_val, best_q = val, q
        if branch == "lowest":
            break
        i = j + 1

    rate, _ = rate_at(best_q)
    usable = not math.isnan(rate) and is_decodable(best_q, rate, sys)
    xbq = xb(best_q)
    return EctResult(
        scheme=Scheme.TRUNCATED,
        q_star=best_q,
        r_used=rate if not math.isnan(rate) else cfg.rate,
        r_star=rate if optimize_rate else None,
        ect=best_val if usable else 0.0,
        xi_bar_at_q_star=xbq,
        constraint_slack=constraint_slack(best_q, xbq, cfg, sys),
        feasible=usable,
    )


def optimize(cfg: SchemeConfig, sys: SystemParams, optimize_rate: bool = False) -> EctResult:
    if cfg.truncated:
        return optimize_truncated(cfg, sys, optimize_rate)
    return optimize_conventional(cfg, sys, optimize_rate)
