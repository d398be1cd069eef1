"""Tail probabilities of the sample mean on the moderate deviation scale.

Analytic approximations (Mills-ratio form on the Rubin-Sethuraman boundary
``lambda_n = a sqrt(log n / n)``), exact Gaussian and binomial tails, and a
seeded Monte Carlo oracle.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._numerics import norm_sf
from .errors import DomainError
from .model_core import ModelFamily

# Monte Carlo replications are drawn in fixed blocks; block i always uses the
# generator PCG64(seed) jumped i times, so the result does not depend on how
# many workers process the blocks.
MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class ScaleRule:
    """How the deviation ``lambda_n`` scales with n."""

    kind: str  # "c_over_sqrt_n" | "rs_boundary" | "fixed"
    value: float

    def lam(self, n: int) -> float:
        if self.kind == "c_over_sqrt_n":
            return self.value / math.sqrt(n)
        if self.kind == "rs_boundary":
            return self.value * math.sqrt(math.log(n) / n)
        if self.kind == "fixed":
            return self.value
        raise DomainError(f"unknown scale rule {self.kind!r}")


def c_over_sqrt_n(c: float) -> ScaleRule:
    return ScaleRule("c_over_sqrt_n", c)


def rs_boundary(a: float) -> ScaleRule:
    return ScaleRule("rs_boundary", a)


def fixed(c: float) -> ScaleRule:
    return ScaleRule("fixed", c)


_REGIME = {"c_over_sqrt_n": "CLT", "rs_boundary": "MODERATE", "fixed": "LARGE"}


@dataclass(frozen=True)
class RegimeLabel:
    label: str
    z: float
    lam: float


def classify_regime(rule: ScaleRule, n: int, sigma: float = 1.0) -> RegimeLabel:
    if n < 3:
        raise DomainError("n must be >= 3")
    if rule.value < 0:
        raise DomainError("scale constant must be non-negative")
    lam = rule.lam(n)
    return RegimeLabel(_REGIME[rule.kind], math.sqrt(n) * lam / sigma, lam)


@dataclass(frozen=True)
class TailEstimate:
    value: float
    se: float
    method: str
    hits: int = -1
    reps: int = 0


def tail_lemma1(n: int, a: float, sigma: float = 1.0) -> TailEstimate:
    """``sqrt(2) sigma / (a sqrt(pi log n)) * n^{-a^2/(2 sigma^2)}``, the leading
    approximation of ``P(|Xbar - theta0| > a sqrt(log n / n))``."""
    if n < 3 or not a > 0 or not sigma > 0:
        raise DomainError("need n >= 3, a > 0, sigma > 0")
    logn = math.log(n)
    val = math.sqrt(2.0) * sigma / (a * math.sqrt(math.pi * logn)) * math.exp(-a * a / (2 * sigma * sigma) * logn)
    return TailEstimate(val, 0.0, "lemma1")


def tail_exact_gaussian(n: int, lam: float, sigma: float = 1.0) -> TailEstimate:
    """``2 (1 - Phi(sqrt(n) lam / sigma))``."""
    if n < 1 or lam < 0 or not sigma > 0:
        raise DomainError("need n >= 1, lambda >= 0, sigma > 0")
    return TailEstimate(float(min(1.0, 2.0 * norm_sf(math.sqrt(n) * lam / sigma))), 0.0, "exact_gaussian")


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed).jumped(block))


def _count_block(family, n, lam, seed, block, size):
    means = family.sampler(block_generator(seed, block), n, size)
    return int(np.count_nonzero(family.exceeds(n, means, lam)))


def mc_tail(family: ModelFamily, n: int, lam: float, reps: int = 10 ** 6, seed: int = 0,
            workers: int = 1) -> TailEstimate:
    """Monte Carlo estimate of ``P(|Xbar_n - theta0| > lam)``.

    Draws the sample mean directly from the family's sampler.  With zero hits
    the ``se`` field carries the one-sided 95% Clopper-Pearson upper bound.
    """
    if reps < 10 ** 4:
        raise DomainError("reps must be >= 1e4")
    if family.sampler is None:
        raise DomainError(f"family {family.name!r} has no sampler")
    if lam < 0:
        raise DomainError("lambda must be non-negative")
    sizes = [MC_BLOCK] * (reps // MC_BLOCK)
    if reps % MC_BLOCK:
        sizes.append(reps % MC_BLOCK)
    jobs = [(family, n, lam, seed, i, s) for i, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            counts = list(ex.map(lambda j: _count_block(*j), jobs))
    else:
        counts = [_count_block(*j) for j in jobs]
    hits = sum(counts)
    p = hits / reps
    if hits == 0:
        se = 1.0 - 0.05 ** (1.0 / reps)
    else:
        se = math.sqrt(p * (1.0 - p) / reps)
    return TailEstimate(p, se, "monte_carlo", hits, reps)


def lindley_alpha(n: int, A: float = 0.0) -> float:
    """Significance level ``sqrt(2/pi) e^{-A/2} / sqrt(n log n)`` implied by
    accepting H0 iff ``Z^2 < A + log n``."""
    if n < 3:
        raise DomainError("n must be >= 3")
    return math.sqrt(2.0 / math.pi) * math.exp(-0.5 * A) / math.sqrt(n * math.log(n))


def lindley_alpha_exact(n: int, A: float = 0.0) -> float:
    """``2 (1 - Phi(sqrt(A + log n)))``."""
    return float(2.0 * norm_sf(math.sqrt(A + math.log(n))))
