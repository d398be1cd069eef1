"""Integrated Bayes risk of symmetric threshold rules, Chernoff error exponents
and the bivariate-normal scoring risk.

For the rule "reject when |t_n| > c"::

    R_n(c) = pi0 L0 alpha_n(c) + pia L1 beta_n(c)
    alpha_n(c) = 2 (1 - Phi(c))
    beta_n(c)  = int P_theta(|t_n| <= c) pi(theta) dtheta
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from ._numerics import SQRT2, golden_section, norm_logpdf, norm_ppf, norm_sf
from .errors import DegenerateCorrelationError, DomainError, QuadratureError
from .evidence import TestProblem
from .model_core import ModelFamily
from .priors import require_proper

ACCEPT_BAND = 12.0  # P(|Z + v| <= c) < 2e-33 once |v| > c + 12
BETA_RTOL = 1e-10
C_TOL = 1e-6


@dataclass(frozen=True)
class RiskCurve:
    n: int
    grid: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    total: np.ndarray
    c_star: float
    r_star: float


def _accept_prob(v: float, c: float) -> float:
    """P(|Z + v| <= c) for Z standard normal, without cancellation for |v| large."""
    if v >= 0:
        return 0.5 * (math.erfc((v - c) / SQRT2) - math.erfc((v + c) / SQRT2))
    return 0.5 * (math.erfc((-v - c) / SQRT2) - math.erfc((c - v) / SQRT2))


def alpha_n(c: float) -> float:
    return float(2.0 * norm_sf(c))


def beta_n(problem: TestProblem, n: int, c: float) -> float:
    """Integrated type II error of the rule ``|t_n| > c``.

    With ``v = sqrt(n)(theta - theta0)/sigma`` the integrand vanishes (below
    2e-33 times the prior) outside ``|v| <= c + 12``; that band is integrated
    adaptively.
    """
    require_proper(problem.prior)
    if problem.family is not None:
        raise DomainError("risk curves use the known-variance Gaussian path")
    if c <= 0:
        return 0.0  # the rule always rejects
    prior = problem.prior
    s = problem.sd / math.sqrt(n)
    th0 = problem.null_mean
    half = c + ACCEPT_BAND

    def integrand(v):
        return _accept_prob(v, c) * prior.density(th0 + s * v)

    v_c = (prior.center - th0) / s
    pts = sorted({p for p in (-c, c, v_c, v_c - 3 * prior.scale / s, v_c + 3 * prior.scale / s)
                  if -half < p < half})
    val, err = quad(integrand, -half, half, points=pts, epsabs=0.0, epsrel=BETA_RTOL, limit=500)
    if not val > 0 or err > 1e-8 * val:
        raise QuadratureError(f"beta_n quadrature error {err:.2e} at c={c}", achieved=err)
    return min(1.0, val * s)


def total_risk(problem: TestProblem, n: int, c: float) -> float:
    return (problem.pi0 * problem.L0 * alpha_n(c)
            + problem.pia * problem.L1 * beta_n(problem, n, c))


def default_grid(n: int, num: int = 60) -> np.ndarray:
    return np.linspace(0.25, math.sqrt(6.0 * math.log(n)), num)


def risk_curve(problem: TestProblem, n: int, grid: Optional[Sequence[float]] = None) -> RiskCurve:
    """Evaluate ``alpha``, ``beta`` and ``R_n`` on an ascending grid and refine the
    minimizer by golden-section search between the grid neighbours of the
    grid minimum (to ``|dc| <= 1e-6``)."""
    grid = default_grid(n) if grid is None else np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("grid needs at least two thresholds")
    if np.any(np.diff(grid) <= 0) or grid[0] < 0:
        raise DomainError("grid must be non-negative and strictly ascending")
    alpha = np.array([alpha_n(c) for c in grid])
    beta = np.array([beta_n(problem, n, c) for c in grid])
    total = problem.pi0 * problem.L0 * alpha + problem.pia * problem.L1 * beta
    i = int(np.argmin(total))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = golden_section(lambda c: total_risk(problem, n, c), lo, hi, tol=C_TOL)
    c_star, r_star = res.x, res.fx
    if total[i] < r_star:
        c_star, r_star = float(grid[i]), float(total[i])
    return RiskCurve(n, grid, alpha, beta, total, c_star, r_star)


def risk_optimal_boundary(problem: TestProblem, n_grid: Sequence[int],
                          num: int = 60) -> list[tuple[int, float]]:
    """Brute-force risk minimizer ``c_star(n)`` for each ``n``."""
    return [(int(n), risk_curve(problem, int(n), default_grid(int(n), num)).c_star) for n in n_grid]


# -- simple-vs-simple error exponents ----------------------------------------------

@dataclass(frozen=True)
class SimpleHypothesis:
    """A fully specified distribution: log density plus where its mass lives."""

    logpdf: Callable[[float], float]
    discrete_support: Optional[tuple] = None
    mode: float = 0.0
    spread: float = 1.0
    mean: float = 0.0
    variance: float = 1.0

    @classmethod
    def gaussian(cls, mu: float, sigma: float = 1.0) -> "SimpleHypothesis":
        return cls(lambda x: float(norm_logpdf((x - mu) / sigma)) - math.log(sigma),
                   mode=mu, spread=sigma, mean=mu, variance=sigma * sigma)

    @classmethod
    def bernoulli(cls, p: float) -> "SimpleHypothesis":
        if not 0 < p < 1:
            raise DomainError("p must lie in (0, 1)")
        return cls(lambda x: math.log(p) if x == 1 else math.log1p(-p),
                   discrete_support=(0, 1), mode=p, spread=1.0, mean=p, variance=p * (1 - p))

    @classmethod
    def at(cls, family: ModelFamily, theta: float) -> "SimpleHypothesis":
        """The family's observation law moved to mean ``theta``."""
        if family.name == "gaussian":
            return cls.gaussian(theta, family.params["sigma"])
        if family.name == "bernoulli":
            return cls.bernoulli(theta)
        raise DomainError(f"no pointwise density for family {family.name!r}")


@dataclass(frozen=True)
class ChernoffResult:
    d_c: float
    s_star: float
    prefactor_error: Optional[float] = None
    exact_error: Optional[float] = None


def chernoff_log_affinity(f0: SimpleHypothesis, f1: SimpleHypothesis, s: float) -> float:
    """``log int f0^{1-s} f1^s``."""
    def integrand_log(x):
        return (1.0 - s) * f0.logpdf(x) + s * f1.logpdf(x)

    if f0.discrete_support is not None:
        support = sorted(set(f0.discrete_support) | set(f1.discrete_support or ()))
        logs = np.array([integrand_log(x) for x in support])
        if np.any(np.isnan(logs)):
            raise DomainError("non-finite integrand")
        return float(np.logaddexp.reduce(logs))
    # shift by the log integrand at the tilted mode so the integral is O(1)
    x_mid = (1.0 - s) * f0.mode + s * f1.mode
    shift = integrand_log(x_mid)
    if not math.isfinite(shift):
        raise DomainError("non-finite integrand")
    width = 50.0 * max(f0.spread, f1.spread)
    lo, hi = min(f0.mode, f1.mode) - width, max(f0.mode, f1.mode) + width
    pts = sorted({f0.mode, f1.mode, x_mid})
    val, _ = quad(lambda x: math.exp(integrand_log(x) - shift), lo, hi, points=pts,
                  epsabs=0.0, epsrel=1e-13, limit=500)
    if not (val > 0 and math.isfinite(val)):
        raise DomainError("non-finite integrand")
    return math.log(val) + shift


def chernoff_information(f0: SimpleHypothesis, f1: SimpleHypothesis, tol: float = 1e-9) -> ChernoffResult:
    """``D_C = -min_{s in [0,1]} log int f0^{1-s} f1^s`` by golden-section search.

    No prefactor is claimed for general pairs; only ``d_c`` and ``s_star``.
    """
    res = golden_section(lambda s: chernoff_log_affinity(f0, f1, s), 0.0, 1.0, tol=tol)
    return ChernoffResult(max(0.0, -res.fx), res.x)


def efron_truax_prefactor(n: int, d_c: float, variance_at_chernoff: float, mean_gap: float) -> float:
    """``2/sqrt(2 pi n) * sqrt(V / gap^2) * exp(-n D_C)``."""
    return (2.0 / math.sqrt(2.0 * math.pi * n) * math.sqrt(variance_at_chernoff / mean_gap ** 2)
            * math.exp(-n * d_c))


def efron_truax_error(n: int, delta: float, sigma: float = 1.0) -> ChernoffResult:
    """Gaussian pair N(0, sigma^2) vs N(delta, sigma^2) with equal priors; the
    midpoint rule has error ``1 - Phi(sqrt(n) delta / (2 sigma))``."""
    if n < 1 or not delta > 0 or not sigma > 0:
        raise DomainError("need n >= 1, delta > 0, sigma > 0")
    d_c = delta * delta / (8.0 * sigma * sigma)
    pref = efron_truax_prefactor(n, d_c, sigma * sigma, delta)
    exact = float(norm_sf(math.sqrt(n) * delta / (2.0 * sigma)))
    return ChernoffResult(d_c, 0.5, pref, exact)


# -- bivariate normal scoring risk -----------------------------------------------------

_U_LIM = 39.0  # phi(39) underflows relative to any probability we report


def orthant_probabilities(a: float, b: float, rho: float) -> tuple[float, float]:
    """``(P{U > a, V < b}, P{U < a, V > b})`` for a standard bivariate normal
    with correlation ``rho``, by integrating the conditional CDF of V given U."""
    if abs(rho) >= 1.0 - 1e-12:
        raise DegenerateCorrelationError(f"|rho| = {abs(rho)} too close to 1")
    r = math.sqrt(1.0 - rho * rho)

    def upper(u):
        return math.exp(-0.5 * u * u) * 0.5 * math.erfc(-(b - rho * u) / (r * SQRT2))

    def lower(u):
        return math.exp(-0.5 * u * u) * 0.5 * math.erfc((b - rho * u) / (r * SQRT2))

    kink = b / rho if rho != 0 else None

    def piece(f, lo, hi):
        if hi <= lo:
            return 0.0
        pts = [p for p in (kink, 0.0) if p is not None and lo < p < hi]
        val, err = quad(f, lo, hi, points=pts or None, epsabs=1e-14, epsrel=1e-12, limit=500)
        if err > 1e-11:
            raise QuadratureError(f"orthant quadrature error {err:.2e}", achieved=err)
        return val / math.sqrt(2.0 * math.pi)

    p_ul = piece(upper, max(a, -_U_LIM), _U_LIM)
    p_lu = piece(lower, -_U_LIM, min(a, _U_LIM))
    return p_ul, p_lu


def bayes_cutoff(n: int, sigma: float, tau_t: float, mu_t: float, theta0: float,
                 L0: float = 1.0, L1: float = 1.0) -> float:
    """Cutoff ``k`` on the sample mean of the Bayes rule under the decision prior
    N(mu_t, tau_t^2): decide ``theta > theta0`` when ``L0 P(theta > theta0 | xbar)``
    exceeds ``L1 P(theta < theta0 | xbar)``."""
    lam2 = 1.0 / (n / sigma ** 2 + 1.0 / tau_t ** 2)
    q = float(norm_ppf(L1 / (L0 + L1)))
    post_mean = theta0 + q * math.sqrt(lam2)
    return sigma ** 2 / n * (post_mean / lam2 - mu_t / tau_t ** 2)


def scoring_risk(n: int, sigma: float, tau_t: float, mu_t: float, tau_s: float, mu_s: float,
                 theta0: float, L0: float = 1.0, L1: float = 1.0,
                 cutoff: Optional[float] = None) -> float:
    """Risk ``L0 P{U > a, V < b} + L1 P{U < a, V > b}`` of the rule accepting
    when ``xbar < cutoff``, scored under the prior N(mu_s, tau_s^2).

    ``rho = (1 + sigma^2/(n tau_s^2))^{-1/2}``, ``a = (theta0 - mu_s)/tau_s``,
    ``b = rho (cutoff - mu_s)/tau_s``.  The decision prior (``mu_t``, ``tau_t``)
    enters only through the cutoff; when ``cutoff`` is None it is the Bayes
    cutoff of that prior (:func:`bayes_cutoff`).
    """
    if min(sigma, tau_t, tau_s) <= 0 or n <= 0:
        raise DomainError("scales and n must be positive")
    if cutoff is None:
        cutoff = bayes_cutoff(n, sigma, tau_t, mu_t, theta0, L0, L1)
    rho = (1.0 + sigma ** 2 / (n * tau_s ** 2)) ** -0.5
    a = (theta0 - mu_s) / tau_s
    b = rho * (cutoff - mu_s) / tau_s
    p_ul, p_lu = orthant_probabilities(a, b, rho)
    return L0 * p_ul + L1 * p_lu
