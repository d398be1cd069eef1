"""Small numerical kernels: normal distribution, bracketed root finding,
golden-section minimization."""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from .errors import SolverError

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT2PI = 0.5 * math.log(2.0 * math.pi)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/golden ratio


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / SQRT2PI


def norm_logpdf(x):
    return -0.5 * np.square(x) - LOG_SQRT2PI


def norm_cdf(x):
    # erfc keeps full relative precision in the lower tail
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / SQRT2)


def norm_sf(x):
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / SQRT2)


def norm_ppf(q):
    return special.ndtri(q)


def two_sided_p(t):
    """Classical two-sided p-value 2(1 - Phi(|t|))."""
    return 2.0 * norm_sf(np.abs(t))


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


class Minimum(NamedTuple):
    x: float
    fx: float
    iterations: int
    converged: bool


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-8, max_iter: int = 500) -> Minimum:
    """Minimize a unimodal ``f`` on ``[lo, hi]`` until the bracket is below ``tol``.

    The returned point is the best of the two interior probes and the
    endpoints, so a monotone ``f`` yields the correct boundary minimizer.
    """
    if not hi > lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for xe in (lo, hi):
        fe = f(xe)
        if fe < best_f:
            best_x, best_f = xe, fe
    converged = (b - a) <= tol and math.isfinite(best_f)
    return Minimum(best_x, best_f, it, converged)


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                xtol: float = 1e-10, max_iter: int = 200) -> float:
    """Plain bisection; requires a sign change on ``[lo, hi]``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise SolverError(f"no sign change on [{lo}, {hi}]", residual=min(abs(flo), abs(fhi)))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= xtol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_bisect(g: Callable[[float], float], dg: Callable[[float], float],
                  lo: float, hi: float, x0: float | None = None,
                  ftol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Root of an increasing ``g`` in ``[lo, hi]``: Newton steps that fall back
    to bisection whenever they leave the current bracket.

    Returns ``(root, residual)``; raises :class:`SolverError` if the residual
    target is not reached.
    """
    glo, ghi = g(lo), g(hi)
    if glo > 0 or ghi < 0:
        raise SolverError(f"root not bracketed by [{lo}, {hi}]", residual=min(abs(glo), abs(ghi)))
    x = 0.5 * (lo + hi) if x0 is None or not lo < x0 < hi else x0
    gx = g(x)
    for _ in range(max_iter):
        if abs(gx) <= ftol:
            return x, gx
        if gx > 0:
            hi = x
        else:
            lo = x
        d = dg(x)
        step_ok = d > 0 and math.isfinite(d)
        xn = x - gx / d if step_ok else lo - 1.0
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        if xn == x:
            break
        x = xn
        gx = g(x)
    if abs(gx) <= ftol:
        return x, gx
    # bracket collapsed to machine precision: accept if the residual is at rounding level
    scale = max(1.0, abs(x))
    if hi - lo <= 4 * np.finfo(float).eps * scale:
        return x, gx
    raise SolverError(f"Newton-bisection did not converge (residual {gx:.3e})", residual=gx)
