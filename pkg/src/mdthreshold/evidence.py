"""Marginal likelihoods, Bayes factors and posterior null probabilities for a
point null ``H0: theta = theta0`` against a prior-mixed alternative."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from ._numerics import LOG_SQRT2PI, SQRT2PI, norm_sf
from .errors import DomainError, QuadratureError
from .model_core import ModelFamily, saddlepoint_density
from .priors import PriorSpec, local_density, require_proper, taylor_at

U_BAND = 12.0  # Gaussian weight beyond |u| = 12 is below 1e-31
MARGINAL_RTOL = 1e-9


@dataclass(frozen=True)
class TestProblem:
    """Point-null testing problem.

    Exactly one of ``sigma`` (known-variance Gaussian mean) or ``family``
    (exponential family, handled through its local normal approximation) is
    used; ``family`` wins when both are given.
    """

    __test__ = False  # keep pytest from collecting this class

    prior: PriorSpec
    theta0: float = 0.0
    sigma: float = 1.0
    family: Optional[ModelFamily] = None
    pi0: float = 0.5
    pia: float = 0.5
    L0: float = 1.0
    L1: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.pi0 < 1.0 and 0.0 < self.pia < 1.0):
            raise DomainError("pi0 and pia must lie in (0, 1)")
        if abs(self.pi0 + self.pia - 1.0) > 1e-12:
            raise DomainError("pi0 + pia must equal 1")
        if not (self.L0 > 0 and self.L1 > 0):
            raise DomainError("loss weights must be positive")
        if self.family is None and not self.sigma > 0:
            raise DomainError("sigma must be positive")

    @property
    def odds_cutoff(self) -> float:
        """Bayes rule rejects H0 when ``BF01 < (pia L1) / (pi0 L0)``."""
        return (self.pia * self.L1) / (self.pi0 * self.L0)

    @property
    def sd(self) -> float:
        """Per-observation standard deviation under the null."""
        return math.sqrt(self.family.variance) if self.family is not None else self.sigma

    @property
    def null_mean(self) -> float:
        return self.family.theta0 if self.family is not None else self.theta0

    @property
    def c_pi(self) -> float:
        return local_density(self.prior, self.null_mean)

    def t_stat(self, xbar: float, n: int) -> float:
        return math.sqrt(n) * (xbar - self.null_mean) / self.sd

    def xbar_at(self, t: float, n: int) -> float:
        return self.null_mean + t * self.sd / math.sqrt(n)


@dataclass(frozen=True)
class EvidenceResult:
    bf01: float
    log_bf01: float
    m_a: float
    f0: float
    post_h0: float


def posterior_null_probability(bf01: float, pi0: float, pia: float) -> float:
    """``pi0 BF01 / (pi0 BF01 + pia)``."""
    if math.isinf(bf01):
        return 1.0
    return 1.0 / (1.0 + (pia / pi0) / bf01) if bf01 > 0 else 0.0


def bf_gaussian_leading(n: int, t: float, sigma: float, c_pi: float) -> float:
    """Leading term ``sqrt(n) / (sigma sqrt(2 pi) c_pi) * exp(-t^2/2)`` of the
    Bayes factor for a known-variance Gaussian mean."""
    if n < 1 or not sigma > 0 or not c_pi > 0:
        raise DomainError("need n >= 1, sigma > 0, c_pi > 0")
    return math.exp(0.5 * math.log(n) - math.log(sigma * SQRT2PI * c_pi) - 0.5 * t * t)


def bf_expfam_leading(n: int, S: float, fisher: float, c_pi: float) -> float:
    """Exponential-family analogue: ``sqrt(n I) / (sqrt(2 pi) c_pi) * exp(-S^2/2)``
    with ``S`` the standardized score statistic."""
    if n < 1 or not fisher > 0 or not c_pi > 0:
        raise DomainError("need n >= 1, fisher > 0, c_pi > 0")
    return math.exp(0.5 * math.log(n * fisher) - LOG_SQRT2PI - math.log(c_pi) - 0.5 * S * S)


def marginal_quadrature(problem: TestProblem, xbar: float, n: int) -> float:
    """Marginal likelihood of ``xbar`` under the alternative.

    Integrates ``phi(u) * pi(xbar + sigma u / sqrt(n))`` over ``|u| <= 12``
    (the scaled-deviation substitution) with adaptive Gauss-Kronrod
    quadrature; the mass outside the band is bounded by
    ``sup(pi) * 2 Phi(-12)``.
    """
    require_proper(problem.prior)
    if n < 1:
        raise DomainError("n must be >= 1")
    prior = problem.prior
    s = problem.sd / math.sqrt(n)

    def integrand(u):
        return math.exp(-0.5 * u * u) * prior.density(xbar + s * u)

    # the prior may be sharply peaked in u when its scale is small against s
    u_c = (prior.center - xbar) / s
    w = prior.scale / s
    pts = sorted({p for p in (u_c - 5 * w, u_c, u_c + 5 * w) if -U_BAND < p < U_BAND})
    val, err = quad(integrand, -U_BAND, U_BAND, points=pts or None,
                    epsabs=0.0, epsrel=1e-12, limit=500)
    val /= SQRT2PI
    err /= SQRT2PI
    tail = prior.max_density * 2.0 * float(norm_sf(U_BAND))
    if not val > 0 or err + tail > MARGINAL_RTOL * val:
        raise QuadratureError(
            f"marginal quadrature reached relative error {(err + tail) / max(val, 1e-300):.2e}",
            achieved=(err + tail) / max(val, 1e-300))
    return val


def laplace_correction(problem: TestProblem, xbar: float, n: int) -> float:
    """Second-order term ``sigma^2 pi''(xbar) / (2n)`` of the marginal expansion."""
    return problem.sd ** 2 * taylor_at(problem.prior, xbar)[2] / (2.0 * n)


def null_density(problem: TestProblem, xbar: float, n: int) -> float:
    """N(theta0, sigma^2/n) density of the sample mean at ``xbar``."""
    s = problem.sd / math.sqrt(n)
    z = (xbar - problem.null_mean) / s
    return math.exp(-0.5 * z * z) / (SQRT2PI * s)


def evidence(problem: TestProblem, xbar: float, n: int) -> EvidenceResult:
    """Bayes factor ``BF01 = f0 / m_a`` and posterior probability of H0.

    Gaussian path: ``m_a`` by quadrature.  Exponential-family path: the Bayes
    factor comes from :func:`bf_expfam_leading` with ``f0`` the saddlepoint
    density of the mean, and ``m_a = f0 / BF01``.
    """
    if problem.family is not None:
        fam = problem.family
        S = problem.t_stat(xbar, n)
        bf = bf_expfam_leading(n, S, fam.fisher, problem.c_pi)
        f0 = saddlepoint_density(fam, n, xbar)
        m_a = f0 / bf
        log_bf = math.log(bf)
    else:
        m_a = marginal_quadrature(problem, xbar, n)
        s = problem.sd / math.sqrt(n)
        z = (xbar - problem.null_mean) / s
        log_f0 = -0.5 * z * z - LOG_SQRT2PI - math.log(s)
        f0 = math.exp(log_f0)
        log_bf = log_f0 - math.log(m_a)
        bf = math.exp(log_bf)
    return EvidenceResult(bf, log_bf, m_a, f0, posterior_null_probability(bf, problem.pi0, problem.pia))


def bf_exact(problem: TestProblem, t: float, n: int) -> float:
    """Finite-n Bayes factor as a function of the standardized statistic."""
    return evidence(problem, problem.xbar_at(t, n), n).bf01
