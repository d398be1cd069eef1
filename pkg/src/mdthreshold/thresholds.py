"""Risk-optimal rejection thresholds on the squared-statistic scale.

Asymptotic formulas::

    t^2 = log n + log(c_pi^-2) - log(2 pi sigma^2) + 2 log(pi0/pia)      (Gaussian mean)
    S^2 = log n + log(c_pi^-2) + log I - log(2 pi) + 2 log(pi0/pia)      (exponential family)

plus the exact finite-n Bayes boundary by root finding and the horseshoe and
Rubin-Sethuraman variants.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from ._numerics import bisect_root
from .errors import DomainError, NoThresholdError
from .evidence import TestProblem, evidence

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ThresholdResult:
    t_crit_sq: float
    t_crit: Optional[float]
    terms: dict = field(default_factory=dict)
    method: str = ""
    note: str = ""

    @property
    def defined(self) -> bool:
        return self.t_crit is not None

    def to_dict(self) -> dict:
        return asdict(self)


def _finish(terms: dict, method: str, note: str = "") -> ThresholdResult:
    t2 = math.fsum(terms.values())
    return ThresholdResult(t2, math.sqrt(t2) if t2 >= 0 else None, terms, method, note)


def _check_common(n, c_pi, pi0, pia):
    if n < 2:
        raise DomainError("n must be >= 2")
    if not c_pi > 0 or math.isinf(c_pi):
        raise DomainError("c_pi must be positive and finite")
    if not (0 < pi0 < 1 and 0 < pia < 1) or abs(pi0 + pia - 1.0) > 1e-12:
        raise DomainError("pi0, pia must be probabilities summing to 1")


def threshold_thm1(n: int, sigma: float, c_pi: float, pi0: float = 0.5, pia: float = 0.5) -> ThresholdResult:
    """Known-variance Gaussian threshold. A negative ``t_crit_sq`` (tiny n with a
    large ``c_pi``) is reported as is with ``t_crit=None``."""
    _check_common(n, c_pi, pi0, pia)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    terms = {
        "log_n": math.log(n),
        "prior_term": -2.0 * math.log(c_pi),
        "info_term": math.log(sigma ** -2) - LOG_2PI,  # same arithmetic as the Fisher form
        "odds_term": 2.0 * math.log(pi0 / pia),
    }
    return _finish(terms, "asymptotic_thm1")


def threshold_thm2(n: int, fisher: float, c_pi: float, pi0: float = 0.5, pia: float = 0.5) -> ThresholdResult:
    """Exponential-family threshold on the standardized score scale."""
    _check_common(n, c_pi, pi0, pia)
    if not fisher > 0:
        raise DomainError("fisher information must be positive")
    terms = {
        "log_n": math.log(n),
        "prior_term": -2.0 * math.log(c_pi),
        "info_term": math.log(fisher) - LOG_2PI,
        "odds_term": 2.0 * math.log(pi0 / pia),
    }
    return _finish(terms, "asymptotic_thm2")


def threshold_numeric(problem: TestProblem, n: int, xtol: float = 1e-10) -> ThresholdResult:
    """Exact finite-n Bayes boundary: the root of ``BF01(t) = odds cutoff`` on
    ``(0, sqrt(4 log n))`` with the quadrature marginal likelihood.

    The bracket is never widened; a missing sign change raises
    :class:`NoThresholdError`.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if problem.family is not None:
        raise DomainError("threshold_numeric needs the known-variance Gaussian path")
    log_cut = math.log(problem.odds_cutoff)
    g = lambda t: evidence(problem, problem.xbar_at(t, n), n).log_bf01 - log_cut
    hi = math.sqrt(4.0 * math.log(n))
    g_lo, g_hi = g(0.0), g(hi)
    if not (g_lo > 0 > g_hi):
        raise NoThresholdError(
            f"log BF01 - log cutoff does not change sign on [0, {hi:.4g}] "
            f"(values {g_lo:.4g}, {g_hi:.4g})")
    t = bisect_root(g, 0.0, hi, xtol=xtol)
    c_pi = problem.c_pi
    asym = threshold_thm1(n, problem.sd, c_pi, problem.pi0, problem.pia)
    terms = dict(asym.terms)
    terms["loss_term"] = 2.0 * math.log(problem.L0 / problem.L1)
    terms["remainder"] = t * t - math.fsum(terms.values())
    return ThresholdResult(t * t, t, terms, "numeric_root")


def threshold_horseshoe(n: int) -> ThresholdResult:
    """``t^2 = log n - 2 log log n``; the unstated O(1) constant is taken as 0."""
    if n < 16:
        raise DomainError("horseshoe threshold needs n >= 16 (log log n > 1)")
    terms = {"log_n": math.log(n), "loglog_term": -2.0 * math.log(math.log(n)), "constant": 0.0}
    return _finish(terms, "horseshoe", note="O(1) constant set to 0")


def threshold_rs(n: int, k: int = 1, lambda_exp: float = 0.0) -> float:
    """Rubin-Sethuraman boundary on the parameter scale,
    ``sqrt(log n / n) * sqrt(lambda + k)`` with the o(1) correction set to 0."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if k < 1:
        raise DomainError("k must be >= 1")
    if not lambda_exp > -k:
        raise DomainError("need lambda_exp > -k")
    return math.sqrt(math.log(n) / n) * math.sqrt(lambda_exp + k)
