"""One-parameter sampling models described by their cumulant generating function.

A :class:`ModelFamily` carries the CGF ``psi`` of a single observation under
the null and its first three derivatives.  From these we get Cramér's rate
function (by Legendre transform), the saddlepoint density of the sample mean
and, for the binomial case, the Chernoff tail bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import expit, gammaln, logsumexp

from ._numerics import SQRT2PI, newton_bisect, golden_section, norm_sf
from .errors import DomainError, SolverError

# count-space slack when deciding |k - n p0| > n*lam on a lattice
_LATTICE_SLACK = 1e-9


@dataclass(frozen=True)
class ModelFamily:
    """CGF description of a one-parameter i.i.d. sampling model under the null.

    ``theta0`` is the null mean ``psi'(0)``.  ``mean_range`` is the open
    interval of attainable means; when omitted it is derived from the limits
    of ``psi1`` at the ends of a finite ``mgf_domain``.
    """

    name: str
    psi: Callable[[float], float]
    psi1: Callable[[float], float]
    psi2: Callable[[float], float]
    psi3: Callable[[float], float]
    theta0: float
    mgf_domain: tuple[float, float] = (-math.inf, math.inf)
    mean_range: Optional[tuple[float, float]] = None
    exact_tail: Optional[Callable[[int, float], float]] = None
    sampler: Optional[Callable[[np.random.Generator, int, int], np.ndarray]] = None
    lattice: bool = False
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        lo, hi = self.mgf_domain
        if not lo < 0.0 < hi:
            raise DomainError("mgf_domain must be an open interval containing 0")
        if self.mean_range is None:
            if math.isinf(lo) or math.isinf(hi):
                raise DomainError("families with an unbounded mgf_domain must declare mean_range")
            object.__setattr__(self, "mean_range", (float(self.psi1(lo)), float(self.psi1(hi))))

    @property
    def variance(self) -> float:
        """Null variance of one observation, ``psi''(0)``."""
        return float(self.psi2(0.0))

    @property
    def fisher(self) -> float:
        """Fisher information for the mean parameter at the null, ``1/psi''(0)``.

        This is the quantity that plays the role of ``1/sigma**2``.
        """
        return 1.0 / self.variance

    def check_t(self, t: float) -> None:
        lo, hi = self.mgf_domain
        if not lo < t < hi:
            raise DomainError(f"t={t} outside mgf_domain ({lo}, {hi})")

    def check_mean(self, lam: float) -> None:
        lo, hi = self.mean_range
        if not (math.isfinite(lam) and lo < lam < hi):
            raise DomainError(f"{lam} is outside the open mean range ({lo}, {hi})")

    def exceeds(self, n: int, means, lam: float):
        """Boolean mask of ``|mean - theta0| > lam``.

        Lattice families decide in count space so that the Monte Carlo and the
        exact tail agree on ties at lattice points.
        """
        means = np.asarray(means, dtype=float)
        if self.lattice:
            return _count_exceeds(n, np.rint(means * n), self.theta0, lam)
        return np.abs(means - self.theta0) > lam


def _count_exceeds(n, k, theta0, lam):
    return np.abs(k - n * theta0) > n * lam + _LATTICE_SLACK


def gaussian(theta0: float = 0.0, sigma: float = 1.0) -> ModelFamily:
    """N(theta0, sigma^2) observations: psi(t) = theta0 t + sigma^2 t^2 / 2."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    s2 = sigma * sigma

    def exact_tail(n, lam):
        if lam < 0:
            raise DomainError("lambda must be non-negative")
        return float(min(1.0, 2.0 * norm_sf(math.sqrt(n) * lam / sigma)))

    def sampler(rng, n, size):
        return theta0 + (sigma / math.sqrt(n)) * rng.standard_normal(size)

    return ModelFamily(
        name="gaussian",
        psi=lambda t: theta0 * t + 0.5 * s2 * t * t,
        psi1=lambda t: theta0 + s2 * t,
        psi2=lambda t: s2,
        psi3=lambda t: 0.0,
        theta0=theta0,
        mean_range=(-math.inf, math.inf),
        exact_tail=exact_tail,
        sampler=sampler,
        params={"theta0": theta0, "sigma": sigma},
    )


def bernoulli(p0: float) -> ModelFamily:
    """Bernoulli(p0) observations: psi(t) = log(1 - p0 + p0 e^t)."""
    if not 0.0 < p0 < 1.0:
        raise DomainError("p0 must lie in (0, 1)")
    lp, lq = math.log(p0), math.log1p(-p0)
    logit = lp - lq

    def psi(t):
        return float(np.logaddexp(lq, lp + t))

    def psi1(t):
        return float(expit(t + logit))

    def psi2(t):
        m = psi1(t)
        return m * (1.0 - m)

    def psi3(t):
        m = psi1(t)
        return m * (1.0 - m) * (1.0 - 2.0 * m)

    def exact_tail(n, lam):
        if lam < 0:
            raise DomainError("lambda must be non-negative")
        k = np.arange(n + 1)
        mask = _count_exceeds(n, k, p0, lam)
        if not mask.any():
            return 0.0
        logpmf = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + k * lp + (n - k) * lq
        return float(min(1.0, math.exp(logsumexp(logpmf[mask]))))

    def sampler(rng, n, size):
        return rng.binomial(n, p0, size) / n

    return ModelFamily(
        name="bernoulli",
        psi=psi,
        psi1=psi1,
        psi2=psi2,
        psi3=psi3,
        theta0=p0,
        mean_range=(0.0, 1.0),
        exact_tail=exact_tail,
        sampler=sampler,
        lattice=True,
        params={"p0": p0},
    )


@dataclass(frozen=True)
class RateFunctionResult:
    value: float
    argmax_t: float
    converged: bool
    residual: float = 0.0


def _bracket_side(g, start: float, bound: float, want_positive: bool) -> float:
    """Walk from ``start`` toward ``bound`` until ``g`` has the wanted sign."""
    if math.isinf(bound):
        step = math.copysign(1.0, bound)
        for k in range(0, 1100):
            t = start + step * (2.0 ** k)
            val = g(t)
            if math.isnan(val):
                break
            if (val > 0) == want_positive:
                return t
    else:
        for k in range(1, 60):
            t = bound - (bound - start) * 2.0 ** (-k)
            if (g(t) > 0) == want_positive:
                return t
    raise SolverError("could not bracket the saddlepoint equation")


def rate_function(family: ModelFamily, lam: float, ftol: float = 1e-12) -> RateFunctionResult:
    """Cramér's rate function ``I(lam) = sup_t {t lam - psi(t)}``.

    Solves ``psi'(t) = lam`` with a safeguarded Newton-bisection iteration.
    Raises :class:`DomainError` if ``lam`` is not an interior mean.
    """
    family.check_mean(lam)
    g = lambda t: family.psi1(t) - lam
    lo_dom, hi_dom = family.mgf_domain
    g0 = g(0.0)
    if g0 == 0.0:
        return RateFunctionResult(0.0, 0.0, True, 0.0)
    if g0 < 0:
        lo, hi = 0.0, _bracket_side(g, 0.0, hi_dom, True)
    else:
        lo, hi = _bracket_side(g, 0.0, lo_dom, False), 0.0
    x0 = (lam - family.theta0) / family.variance
    t_star, resid = newton_bisect(g, family.psi2, lo, hi, x0=x0, ftol=ftol)
    value = t_star * lam - family.psi(t_star)
    return RateFunctionResult(max(value, 0.0), t_star, True, resid)


def saddlepoint_density(family: ModelFamily, n: int, theta_hat: float) -> float:
    """Saddlepoint approximation to the density of the sample mean at ``theta_hat``:

    ``sqrt(n / (2 pi psi''(t*))) * exp(-n I(theta_hat))`` with ``psi'(t*) = theta_hat``.
    Exact for the Gaussian family.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    r = rate_function(family, theta_hat)
    k2 = family.psi2(r.argmax_t)
    return math.sqrt(n / k2) / SQRT2PI * math.exp(-n * r.value)


@dataclass(frozen=True)
class ChernoffBound:
    value: float
    t_star: float
    vacuous: bool

    def __float__(self):
        return self.value


def chernoff_bound_binomial(n: int, p0: float, c: float) -> ChernoffBound:
    """``inf_{t>=0} e^{-tc} ((1-p0) + p0 e^t)^n``, the Chernoff bound on P(X >= c)
    for X ~ Bin(n, p0), found by golden-section search on the log objective.

    For ``c/n <= p0`` the infimum sits at ``t = 0`` and the bound is 1 (flagged
    ``vacuous``).
    """
    if not 0.0 < p0 < 1.0:
        raise DomainError("p0 must lie in (0, 1)")
    if not 0.0 <= c <= n:
        raise DomainError("c must lie in [0, n]")
    if c / n <= p0:
        return ChernoffBound(1.0, 0.0, True)
    if c == n:
        # infimum approached as t -> infinity
        return ChernoffBound(p0 ** n, math.inf, False)
    fam = bernoulli(p0)
    h = lambda t: -t * c + n * fam.psi(t)
    dh = lambda t: -c + n * fam.psi1(t)
    hi = 1.0
    while dh(hi) <= 0:
        hi *= 2.0
    res = golden_section(h, 0.0, hi, tol=1e-11 * hi)
    if not res.converged:
        raise SolverError("golden-section search failed", residual=dh(res.x))
    return ChernoffBound(math.exp(res.fx), res.x, False)
