"""Real-argument special functions and a semi-infinite quadrature engine.

Everything here is vectorized over numpy arrays; scalar inputs come back as
Python floats.  The exponential integral is split into regimes:

* ``x < 0``: ascending series for ``|x| <= 2``, Lentz continued fraction
  for ``E1(-x)`` beyond (the series cancels catastrophically there);
* ``0 < x <= 40``: ascending series, except within 0.1 of the zero of Ei
  where a 16-point Gauss-Legendre rule integrates ``e^t/t`` from the root;
* ``x > 40``: the asymptotic expansion, truncated at its smallest term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, QuadratureError

EULER_GAMMA = 0.57721566490153286061
# Positive zero of Ei(x), split into its double and the rounding residual.
EI_ROOT = 0.37250741078136663446
_EI_ROOT_LO = 1.3140183414386028e-17
_EI_ROOT_SLOPE = 3.8962157339071674
EI_OVERFLOW = 709.782712893384
SERIES_LIMIT = 40.0
E1_SERIES_LIMIT = 2.0
ROOT_HALF_WIDTH = 0.1

_EPS = np.finfo(float).eps
_TINY = 1e-300
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


_E1_K = np.arange(1, 31)
_E1_COEFFS = np.array([(-1.0) ** k / (k * math.factorial(k)) for k in range(1, 31)])


def _e1_series(u):
    """E1(u) by the ascending series; accurate for 0 < u <= 2."""
    total = np.power(u[..., None], _E1_K) @ _E1_COEFFS
    return -EULER_GAMMA - np.log(u) - total


def _e1_scaled_cf(u):
    """exp(u) * E1(u) by the modified Lentz continued fraction (u > 1)."""
    b = u + 1.0
    c = np.full_like(u, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if i % 4 == 0 and np.all(np.abs(delta - 1.0) < 4 * _EPS):
            return h
    raise ConvergenceError("continued fraction for E1 did not converge")


def _ei_series(x):
    """Ascending series gamma + ln x + sum x^k / (k k!), for 0 < x <= 40."""
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 400):
        term = term * x / k
        inc = term / k
        total += inc
        if np.all(inc <= _EPS * 0.25 * total):
            break
    else:
        raise ConvergenceError("Ei power series did not converge")
    return EULER_GAMMA + np.log(x) + total


def _ei_near_root(x):
    half = 0.5 * (x - EI_ROOT)
    mid = 0.5 * (x + EI_ROOT)
    t = mid[..., None] + half[..., None] * _GL_NODES
    integral = half * np.sum(_GL_WEIGHTS * np.exp(t) / t, axis=-1)
    # Ei at the rounded root is not exactly zero
    return integral - _EI_ROOT_SLOPE * _EI_ROOT_LO


def _ei_asymptotic(x):
    total = np.ones_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        nxt = term * k / x
        # stop each lane once terms are negligible or start growing
        active &= (nxt < term) & (nxt > _EPS * 0.25 * total)
        if not active.any():
            break
        term = np.where(active, nxt, term)
        total = total + np.where(active, nxt, 0.0)
    return np.exp(x) / x * total


def _e1_series_scalar(u):
    total = 0.0
    term = 1.0
    for k in range(1, 31):
        term *= -u / k
        total += term / k
    return -EULER_GAMMA - math.log(u) - total


def _e1_scaled_cf_scalar(u):
    b = u + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 4 * _EPS:
            return h
    raise ConvergenceError("continued fraction for E1 did not converge")


def _e1_scaled_scalar(u):
    if u <= E1_SERIES_LIMIT:
        return math.exp(u) * _e1_series_scalar(u)
    return _e1_scaled_cf_scalar(u)


def _ei_scalar(x):
    if x < 0:
        u = -x
        if u <= E1_SERIES_LIMIT:
            return -_e1_series_scalar(u)
        return -_e1_scaled_cf_scalar(u) * math.exp(-u)
    if abs(x - EI_ROOT) < ROOT_HALF_WIDTH or x > SERIES_LIMIT:
        return float(ei(np.array([x]))[0])
    total = 0.0
    term = 1.0
    for k in range(1, 400):
        term *= x / k
        inc = term / k
        total += inc
        if inc <= _EPS * 0.25 * total:
            return EULER_GAMMA + math.log(x) + total
    raise ConvergenceError("Ei power series did not converge")


def ei(x):
    """Exponential integral ``Ei(x) = -int_{-x}^inf e^{-t}/t dt`` for real ``x != 0``.

    Raises
    ------
    DomainError
        If any ``x`` is zero (logarithmic singularity) or NaN.
    OverflowError
        If any ``x`` exceeds ~709.78, where Ei overflows a double.
    """
    if isinstance(x, (float, int)):
        if x == 0 or x != x:
            raise DomainError("Ei(x) is undefined at x = 0")
        if x > EI_OVERFLOW:
            raise OverflowError("Ei(x) overflows for x > 709.78")
        return _ei_scalar(float(x))
    arr, scalar = _as_array(x)
    if np.any(arr == 0.0) or np.any(np.isnan(arr)):
        raise DomainError("Ei(x) is undefined at x = 0")
    if np.any(arr > EI_OVERFLOW):
        raise OverflowError("Ei(x) overflows for x > 709.78")
    if scalar:
        return _ei_scalar(float(arr))
    out = np.empty_like(arr)

    neg = arr < 0
    u = -arr[neg]
    e1 = np.empty_like(u)
    small = u <= E1_SERIES_LIMIT
    if small.any():
        e1[small] = _e1_series(u[small])
    if not small.all():
        e1[~small] = _e1_scaled_cf(u[~small]) * np.exp(-u[~small])
    out[neg] = -e1

    root = np.abs(arr - EI_ROOT) < ROOT_HALF_WIDTH
    series = (arr > 0) & (arr <= SERIES_LIMIT) & ~root
    big = arr > SERIES_LIMIT
    if root.any():
        out[root] = _ei_near_root(arr[root])
    if series.any():
        out[series] = _ei_series(arr[series])
    if big.any():
        out[big] = _ei_asymptotic(arr[big])
    return _out(out, scalar)


def e1_scaled(u):
    """``exp(u) * E1(u) = -exp(u) * Ei(-u)`` for ``u > 0``, without overflow."""
    if isinstance(u, (float, int)):
        if not u > 0:
            raise DomainError("e1_scaled requires u > 0")
        return _e1_scaled_scalar(float(u))
    arr, scalar = _as_array(u)
    if np.any(~(arr > 0)):
        raise DomainError("e1_scaled requires u > 0")
    if scalar:
        return _e1_scaled_scalar(float(arr))
    out = np.empty_like(arr)
    small = arr <= E1_SERIES_LIMIT
    if small.any():
        out[small] = np.exp(arr[small]) * _e1_series(arr[small])
    if not small.all():
        out[~small] = _e1_scaled_cf(arr[~small])
    return _out(out, scalar)


def ei_diff_scaled(a, b):
    """``exp(a) * [Ei(-a-b) - Ei(-a)]`` for ``a > 0, b >= 0``.

    Equal to ``int_0^b e^{-s} / (a + s) ds``; short intervals are integrated
    directly to dodge the cancellation in the difference of two Ei values.
    """
    a_arr, sa = _as_array(a)
    b_arr, sb = _as_array(b)
    a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
    if np.any(~(a_arr > 0)) or np.any(b_arr < 0):
        raise DomainError("ei_diff_scaled requires a > 0 and b >= 0")
    if sa and sb:
        a_f, b_f = float(a_arr), float(b_arr)
        if b_f <= 0.25 * a_f and b_f <= 2.0:
            half = 0.5 * b_f
            s = half * (1.0 + _GL_NODES)
            return float(half * np.dot(_GL_WEIGHTS, np.exp(-s) / (a_f + s)))
        return _e1_scaled_scalar(a_f) - math.exp(-b_f) * _e1_scaled_scalar(a_f + b_f)
    out = np.empty(a_arr.shape)
    short = (b_arr <= 0.25 * a_arr) & (b_arr <= 2.0)
    if short.any():
        aa, bb = a_arr[short], b_arr[short]
        half = 0.5 * bb
        s = half[..., None] * (1.0 + _GL_NODES)
        out[short] = half * np.sum(_GL_WEIGHTS * np.exp(-s) / (aa[..., None] + s), axis=-1)
    if not short.all():
        aa, bb = a_arr[~short], b_arr[~short]
        out[~short] = e1_scaled(aa) - np.exp(-bb) * e1_scaled(aa + bb)
    return _out(out, sa and sb)


def _positive_series(z, coeff_ratio, first, max_terms, name):
    """Sum a series of positive terms with the 3-consecutive-terms stop rule."""
    if not z > 0:
        raise DomainError(f"{name} requires z > 0")
    if z > 700:
        raise DomainError(f"{name}: z = {z} exceeds the series overflow threshold")
    total = first
    term = first
    quiet = 0
    for k in range(max_terms):
        term = term * coeff_ratio(k, z)
        total += term
        quiet = quiet + 1 if term < 1e-16 * total else 0
        if quiet >= 3:
            return total
    raise ConvergenceError(f"{name}: no convergence within {max_terms} terms")


def hyper3f3_unit_params(z: float, max_terms: int = 10_000) -> float:
    """``3F3([1,1,1],[2,2,2]; z) = sum_k z^k / ((k+1)^3 k!)`` for ``z > 0``."""
    return _positive_series(
        float(z), lambda k, z: z * (k + 1) ** 2 / (k + 2) ** 3, 1.0, max_terms, "3F3"
    )


def harmonic_exp_series(z: float, max_terms: int = 10_000) -> float:
    """``sum_{n>=1} H_n z^n / (n n!)`` where ``H_n`` is the n-th harmonic number.

    The integral of ``exp(t) Ein(t) / t`` from 0 to ``z``; appears next to the
    3F3 term in the closed form of the averaged conventional-scheme error.
    """
    z = float(z)
    if not z > 0:
        raise DomainError("harmonic_exp_series requires z > 0")
    if z > 700:
        raise DomainError("harmonic_exp_series: z exceeds the overflow threshold")
    total = 0.0
    power = 1.0
    harmonic = 0.0
    quiet = 0
    for n in range(1, max_terms + 1):
        harmonic += 1.0 / n
        power *= z / n
        term = harmonic * power / n
        total += term
        quiet = quiet + 1 if term < 1e-16 * total else 0
        if quiet >= 3:
            return total
    raise ConvergenceError(f"harmonic_exp_series: no convergence within {max_terms} terms")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 500

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


# Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[:-1][::-1]])
_GWEIGHTS[7] = _WG[-1]


def _gk15(g, lo, hi):
    """Kronrod estimates and |Kronrod - Gauss| errors on a batch of intervals."""
    half = 0.5 * (hi - lo)
    x = 0.5 * (hi + lo)[:, None] + half[:, None] * _NODES
    vals = g(x.ravel()).reshape(x.shape)
    k = half * (vals @ _KWEIGHTS)
    return k, np.abs(k - half * (vals @ _GWEIGHTS))


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    lower: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integrate a vectorized ``f`` over ``[lower, inf)``.

    The domain is mapped onto ``(0, 1]`` with ``t = 1 / (1 + x - lower)`` and
    integrated by adaptive Gauss-Kronrod 7/15 bisection.  Each round bisects
    every interval whose error exceeds its share of the tolerance, so ``f``
    sees one large batch per round.  Nodes never touch the endpoints; ``f``
    need only be finite on the open interval.

    Raises
    ------
    QuadratureError
        When ``spec.max_subdivisions`` bisections do not meet
        ``max(abs_tol, rel_tol * |I|)``.
    """
    spec = spec or QuadratureSpec()
    lower = float(lower)

    def g(t):
        return f(lower + (1.0 - t) / t) / (t * t)

    edges = np.linspace(0.0, 1.0, 9)
    lo, hi = edges[:-1], edges[1:]
    val, err = _gk15(g, lo, hi)
    splits = 0
    while True:
        total = math.fsum(val)
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        err_sum = float(err.sum())
        if err_sum <= tol:
            return total
        if splits >= spec.max_subdivisions:
            raise QuadratureError("tolerance not met", total, err_sum)
        pick = err > tol / len(err)
        if pick.sum() > spec.max_subdivisions - splits:
            # budget nearly spent: refine only the worst offenders
            worst = np.argsort(err)[::-1][: spec.max_subdivisions - splits]
            pick = np.zeros_like(pick)
            pick[worst] = True
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        new_val, new_err = _gk15(g, new_lo, new_hi)
        lo = np.concatenate([lo[~pick], new_lo])
        hi = np.concatenate([hi[~pick], new_hi])
        val = np.concatenate([val[~pick], new_val])
        err = np.concatenate([err[~pick], new_err])
        splits += int(pick.sum())
