"""Desk-scale checks of two marginal-likelihood asymptotics in the conjugate
Gaussian mean model (known sigma, prior N(mu, tau^2)):

* the BIC/Laplace gap ``log m(x) - [log f(x | mle) - (d/2) log n]`` stays O(1);
* Dawid's expansion: ``2 * [log(p_n/q_n) + (d/2) log(n/2pi) - log vartheta]``
  is asymptotically chi-square with d degrees of freedom under the true model.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from ._numerics import LOG_SQRT2PI, norm_cdf
from .errors import DomainError

KS_LEVEL = 0.01
MIN_REPS = 500
_CHUNK_VALUES = 1 << 22  # observations simulated per batch


def bic_gap(loglik_mle: float, d: int, n: int, log_marginal_exact: float) -> float:
    """``log_marginal_exact - (loglik_mle - (d/2) log n)``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return log_marginal_exact - (loglik_mle - 0.5 * d * math.log(n))


def gaussian_loglik(x: np.ndarray, theta: float, sigma: float = 1.0) -> float:
    x = np.asarray(x, dtype=float)
    r = (x - theta) / sigma
    return float(-0.5 * np.dot(r, r) - x.size * (LOG_SQRT2PI + math.log(sigma)))


def conjugate_log_marginal(x: np.ndarray, sigma: float = 1.0, tau: float = 1.0, mu: float = 0.0) -> float:
    """Exact ``log int prod N(x_i; theta, sigma^2) N(theta; mu, tau^2) dtheta``."""
    x = np.asarray(x, dtype=float)
    n = x.size
    xbar = float(x.mean())
    ss = float(np.sum((x - xbar) ** 2))
    v = tau * tau + sigma * sigma / n
    return (-n * (LOG_SQRT2PI + math.log(sigma)) - ss / (2 * sigma * sigma)
            + LOG_SQRT2PI + math.log(sigma / math.sqrt(n))
            - LOG_SQRT2PI - 0.5 * math.log(v) - (xbar - mu) ** 2 / (2 * v))


def conjugate_bic_gap(x: np.ndarray, sigma: float = 1.0, tau: float = 1.0, mu: float = 0.0) -> float:
    x = np.asarray(x, dtype=float)
    return bic_gap(gaussian_loglik(x, float(x.mean()), sigma), 1, x.size,
                   conjugate_log_marginal(x, sigma, tau, mu))


def chi2_1_cdf(x):
    """CDF of chi-square(1) written through the normal CDF: 2 Phi(sqrt x) - 1."""
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return 2.0 * norm_cdf(np.sqrt(x)) - 1.0


@dataclass
class LabReport:
    statistic_samples: list
    reference: str
    ks_stat: float
    ks_p: float
    passed: bool
    level: float = KS_LEVEL
    params: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.statistic_samples))

    def to_dict(self, include_samples: bool = True) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        out["mean"] = self.mean
        if not include_samples:
            out.pop("statistic_samples")
        return out

    def to_json(self, include_samples: bool = True) -> str:
        return json.dumps(self.to_dict(include_samples))


def dawid_statistics(n: int, reps: int, seed: int, prior_tau: float = 1.0, sigma: float = 1.0) -> np.ndarray:
    """Per replication, ``D = log(p_n/q_n) + (1/2) log(n/2pi) - log vartheta(0)``
    with data simulated from N(0, sigma^2), ``p_n`` the conjugate marginal and
    ``q_n`` the true likelihood."""
    rng = np.random.Generator(np.random.PCG64(seed))
    # vartheta = prior density / sqrt(Fisher information per observation)
    log_vartheta = -LOG_SQRT2PI - math.log(prior_tau) + math.log(sigma)
    out = np.empty(reps)
    per_batch = max(1, _CHUNK_VALUES // n)
    for start in range(0, reps, per_batch):
        m = min(per_batch, reps - start)
        xs = sigma * rng.standard_normal((m, n))
        for j in range(m):
            x = xs[j]
            log_ratio = conjugate_log_marginal(x, sigma, prior_tau, 0.0) - gaussian_loglik(x, 0.0, sigma)
            out[start + j] = log_ratio + 0.5 * math.log(n / (2 * math.pi)) - log_vartheta
    return out


def dawid_check(n: int, reps: int, seed: int, prior_tau: float = 1.0, level: float = KS_LEVEL) -> LabReport:
    """Kolmogorov-Smirnov comparison of ``2D`` against chi-square(1)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if prior_tau < 0.1:
        raise DomainError("prior_tau must be >= 0.1")
    warns = []
    if reps < MIN_REPS:
        warns.append(f"reps={reps} below {MIN_REPS}; KS power is low")
    d = dawid_statistics(n, reps, seed, prior_tau)
    two_d = 2.0 * d
    ks = stats.kstest(two_d, chi2_1_cdf)
    return LabReport(
        statistic_samples=d.tolist(),
        reference="0.5 * chi2(1)  (KS applied to 2D vs chi2(1))",
        ks_stat=float(ks.statistic),
        ks_p=float(ks.pvalue),
        passed=bool(ks.pvalue > level),
        level=level,
        params={"n": n, "reps": reps, "seed": seed, "prior_tau": prior_tau},
        warnings=warns,
    )


def bic_gap_sweep(n_values, seed: int = 0, theta: float = 0.3, sigma: float = 1.0,
                  tau: float = 1.0) -> list[tuple[int, float]]:
    """BIC gap of the conjugate instance on data simulated at mean ``theta``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for n in n_values:
        x = theta + sigma * rng.standard_normal(int(n))
        out.append((int(n), conjugate_bic_gap(x, sigma, tau)))
    return out
