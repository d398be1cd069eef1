import math

import pytest

from mdthreshold import cauchy_prior, gaussian_prior
from mdthreshold.evidence import TestProblem


@pytest.fixture
def cauchy_problem():
    return TestProblem(cauchy_prior(0.0, 1.0))


@pytest.fixture
def gaussian_problem():
    return TestProblem(gaussian_prior(0.0, 1.0))


def conjugate_marginal(xbar, n, tau=1.0, mu=0.0, sigma=1.0):
    v = tau * tau + sigma * sigma / n
    return math.exp(-(xbar - mu) ** 2 / (2 * v)) / math.sqrt(2 * math.pi * v)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion and return whether it held."""
    def record(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        _VERDICTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
