"""Scalar search primitives: bisection on monotone targets, golden section."""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_log(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    ftol: float = 0.0,
    rtol: float = 1e-15,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` on ``[lo, hi]`` (both positive), bisecting in ``log x``.

    ``f(lo)`` and ``f(hi)`` must differ in sign.  Stops when ``|f| <= ftol``
    or the bracket is narrower than ``rtol`` relative.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo:g}, {hi:g}]")
    mid = math.sqrt(lo * hi)
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        fm = f(mid)
        if abs(fm) <= ftol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi / lo - 1.0 <= rtol:
            break
    return mid


def boundary_log(
    ok: Callable[[float], bool], good: float, bad: float, rtol: float = 1e-10, max_iter: int = 200
) -> float:
    """Boundary of a predicate between ``good`` (true) and ``bad`` (false).

    Returns a point where ``ok`` holds, within ``rtol`` of the boundary.
    """
    for _ in range(max_iter):
        if abs(math.log(bad / good)) <= rtol:
            break
        mid = math.sqrt(good * bad)
        if ok(mid):
            good = mid
        else:
            bad = mid
    return good


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9, max_iter: int = 200
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmax, max)``.

    The endpoints are evaluated as well, so a monotone ``f`` returns its
    better endpoint rather than an interior point near it.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    best = max([(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)])
    return best[1], best[0]
