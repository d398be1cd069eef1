import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import gammaln, logsumexp

from mdthreshold import (DomainError, bernoulli, chernoff_bound_binomial, gaussian, rate_function,
                         saddlepoint_density)


def bernoulli_kl(a, p):
    return a * math.log(a / p) + (1 - a) * math.log((1 - a) / (1 - p))


def binomial_upper_tail(n, p, c):
    k = np.arange(math.ceil(c), n + 1)
    logs = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + k * math.log(p) + (n - k) * math.log1p(-p)
    return float(np.exp(logsumexp(logs)))


class TestFamilies:
    @pytest.mark.parametrize("fam", [gaussian(0.3, 2.0), bernoulli(0.2), bernoulli(0.5)])
    def test_cgf_vanishes_at_zero_and_is_convex(self, fam):
        assert fam.psi(0.0) == pytest.approx(0.0, abs=1e-15)
        ts = np.linspace(-5, 5, 41)
        assert all(fam.psi2(t) > 0 for t in ts)

    def test_gaussian_cgf(self):
        fam = gaussian(0.3, 2.0)
        for t in (-1.0, 0.5, 2.0):
            assert fam.psi(t) == pytest.approx(0.3 * t + 2.0 * t * t)
            assert fam.psi2(t) == pytest.approx(4.0)

    def test_fisher_matches_inverse_variance(self):
        assert bernoulli(0.5).fisher == pytest.approx(4.0)
        assert gaussian(0, 2.0).fisher == pytest.approx(0.25)

    @pytest.mark.parametrize("fam", [gaussian(0, 1), bernoulli(0.3)])
    @pytest.mark.parametrize("n,lam", [(10, 0.0), (50, 0.1), (400, 0.05), (3, 5.0)])
    def test_exact_tail_is_probability(self, fam, n, lam):
        assert 0.0 <= fam.exact_tail(n, lam) <= 1.0


class TestRateFunction:
    def test_gaussian_closed_form(self):
        assert rate_function(gaussian(0, 1), 0.5).value == pytest.approx(0.125, abs=1e-14)

    def test_vanishes_at_mean(self):
        r = rate_function(bernoulli(0.5), 0.5)
        assert r.value == pytest.approx(0.0, abs=1e-14)
        assert r.argmax_t == pytest.approx(0.0, abs=1e-10)

    def test_bernoulli_against_brute_force_grid(self):
        fam = bernoulli(0.5)
        ts = np.linspace(-10, 10, 2_000_001)
        brute = float(np.max(ts * 0.8 - np.logaddexp(0.0, ts) + math.log(2)))
        r = rate_function(fam, 0.8)
        assert r.value == pytest.approx(brute, abs=1e-9)
        assert r.value == pytest.approx(bernoulli_kl(0.8, 0.5), abs=1e-13)
        assert r.value == pytest.approx(0.19274475702175753, abs=1e-12)

    @pytest.mark.parametrize("p,lam", [(0.5, 0.8), (0.2, 0.05), (0.2, 0.9), (0.9, 0.999)])
    def test_tilt_solves_mean_equation(self, p, lam):
        fam = bernoulli(p)
        r = rate_function(fam, lam)
        assert r.converged
        assert fam.psi1(r.argmax_t) == pytest.approx(lam, abs=1e-10)
        assert r.value == pytest.approx(bernoulli_kl(lam, p), rel=1e-10)

    @pytest.mark.parametrize("lam", [0.0, 1.0, -0.1, 1.5])
    def test_bernoulli_endpoints_rejected(self, lam):
        with pytest.raises(DomainError):
            rate_function(bernoulli(0.5), lam)

    @settings(max_examples=60, deadline=None)
    @given(p=st.floats(0.05, 0.95), lam=st.floats(0.02, 0.98), t=st.floats(-20, 20))
    def test_convex_duality(self, p, lam, t):
        fam = bernoulli(p)
        assert rate_function(fam, lam).value >= t * lam - fam.psi(t) - 1e-12

    @settings(max_examples=40, deadline=None)
    @given(lam=st.floats(-5, 5), sigma=st.floats(0.2, 5))
    def test_nonnegative_and_gaussian_exact(self, lam, sigma):
        r = rate_function(gaussian(0, sigma), lam)
        assert r.value >= 0
        assert r.value == pytest.approx(lam * lam / (2 * sigma * sigma), rel=1e-10, abs=1e-15)


class TestSaddlepoint:
    def test_null_mean_value(self):
        assert saddlepoint_density(gaussian(0, 1), 10, 0.0) == pytest.approx(math.sqrt(10 / (2 * math.pi)), rel=1e-14)

    @pytest.mark.parametrize("n", [1, 10, 100, 10_000])
    @pytest.mark.parametrize("theta", [-0.7, 0.0, 0.3, 2.5])
    @pytest.mark.parametrize("sigma", [0.5, 1.0, 3.0])
    def test_gaussian_exactness(self, n, theta, sigma):
        sd = sigma / math.sqrt(n)
        exact = math.exp(-0.5 * (theta / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
        assert saddlepoint_density(gaussian(0, sigma), n, theta) == pytest.approx(exact, rel=1e-12)

    @staticmethod
    def total_mass(p, n):
        fam = bernoulli(p)
        val, _ = quad(lambda a: saddlepoint_density(fam, n, a), 1e-12, 1 - 1e-12,
                      points=[p], limit=400, epsabs=1e-12, epsrel=1e-10)
        return val

    def test_normalization_at_twenty(self):
        # the O(1/n) error is still visible at n=20; frozen from the quadrature oracle
        assert self.total_mass(0.5, 20) == pytest.approx(1.013584, abs=1e-6)

    @pytest.mark.parametrize("p", [0.5, 0.2, 0.7])
    @pytest.mark.parametrize("n", [50, 100, 400])
    def test_normalization_band(self, p, n):
        assert 0.98 <= self.total_mass(p, n) <= 1.02

    def test_normalization_error_shrinks(self):
        errs = [abs(self.total_mass(0.5, n) - 1) for n in (20, 50, 100, 400)]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_exponent_is_rate(self):
        fam = bernoulli(0.3)
        n, a = 40, 0.55
        r = rate_function(fam, a)
        pref = math.sqrt(n / (2 * math.pi * fam.psi2(r.argmax_t)))
        assert saddlepoint_density(fam, n, a) == pytest.approx(pref * math.exp(-n * r.value), rel=1e-12)


class TestChernoffBound:
    def test_vacuous_at_mean(self):
        b = chernoff_bound_binomial(10, 0.5, 5)
        assert float(b) == 1.0 and b.vacuous

    def test_matches_rate(self):
        b = chernoff_bound_binomial(10, 0.5, 8)
        assert not b.vacuous
        assert float(b) == pytest.approx(math.exp(-10 * rate_function(bernoulli(0.5), 0.8).value), rel=1e-10)
        assert float(b) == pytest.approx(math.exp(-1.9274475702175753), rel=1e-10)

    def test_dominates_exact_tail(self):
        assert float(chernoff_bound_binomial(100, 0.5, 60)) >= binomial_upper_tail(100, 0.5, 60)

    @pytest.mark.parametrize("p0", [0.1, 0.5, 0.8])
    @pytest.mark.parametrize("frac", [0.05, 0.3, 0.6, 0.95])
    def test_chernoff_cramer_agreement(self, p0, frac):
        n = 200
        a = p0 + frac * (1 - p0)
        b = chernoff_bound_binomial(n, p0, a * n)
        assert math.log(float(b)) / n == pytest.approx(-bernoulli_kl(a, p0), abs=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(5, 300), p0=st.floats(0.05, 0.95), u=st.floats(0, 1))
    def test_bound_property(self, n, p0, u):
        c = u * n
        assert float(chernoff_bound_binomial(n, p0, c)) >= binomial_upper_tail(n, p0, c) * (1 - 1e-9)

    def test_all_successes(self):
        assert float(chernoff_bound_binomial(12, 0.3, 12)) == pytest.approx(0.3 ** 12, rel=1e-12)
