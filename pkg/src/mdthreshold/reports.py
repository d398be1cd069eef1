"""Tables and summaries behind the CLI commands."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

from ._numerics import norm_ppf, two_sided_p
from .evidence import TestProblem, bf_gaussian_leading, evidence
from .priors import PriorSpec, local_density
from .thresholds import threshold_numeric, threshold_thm1

TABLE1_N = (5, 10, 100, 1000, 100000)


@dataclass(frozen=True)
class CalibrationRow:
    n: int
    t_rs: float
    t_np: float
    t_ev: float
    p_at_rs: float

    def to_dict(self) -> dict:
        return asdict(self)


def parse_odds(text: str) -> tuple[float, float]:
    """``"p0:pa"`` -> normalized ``(pi0, pia)``."""
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"odds must look like p0:pa, got {text!r}") from exc
    if not (a > 0 and b > 0):
        raise ValueError("odds components must be positive")
    return a / (a + b), b / (a + b)


def display_p(p: float) -> float:
    """Round a p-value for display: 3 decimals, or one significant figure below 0.001."""
    if p >= 1e-3:
        return round(p, 3)
    if p <= 0:
        return 0.0
    digits = -int(math.floor(math.log10(p)))
    return round(p, digits)


def calibration_row(n: int, c_pi: float, sigma: float = 1.0, pi0: float = 0.5, pia: float = 0.5,
                    alpha: float = 0.05, paper_parity: bool = False) -> CalibrationRow:
    """Risk-optimal, fixed-alpha and e-value cutoffs at sample size ``n``.

    In paper-parity mode the cutoff is rounded to 2 decimals first and the
    p-value is taken at that displayed cutoff.
    """
    res = threshold_thm1(n, sigma, c_pi, pi0, pia)
    if res.t_crit is None:
        raise ValueError(f"t_crit^2 = {res.t_crit_sq:.4g} < 0 at n={n}")
    t_np = float(norm_ppf(1.0 - alpha / 2.0))
    t_ev = math.sqrt(2.0 * math.log(1.0 / alpha))
    t_rs = res.t_crit
    if paper_parity:
        t_rs = round(t_rs, 2)
        return CalibrationRow(n, t_rs, round(t_np, 2), round(t_ev, 2), display_p(float(two_sided_p(t_rs))))
    return CalibrationRow(n, t_rs, t_np, t_ev, float(two_sided_p(t_rs)))


def calibration_table(n_list: Iterable[int], prior: PriorSpec, sigma: float = 1.0,
                      pi0: float = 0.5, pia: float = 0.5, alpha: float = 0.05,
                      paper_parity: bool = False, theta0: float = 0.0) -> list[CalibrationRow]:
    c_pi = local_density(prior, theta0)
    return [calibration_row(int(n), c_pi, sigma, pi0, pia, alpha, paper_parity) for n in n_list]


def lindley_report(n: int, t: float, prior: PriorSpec, sigma: float = 1.0,
                   pi0: float = 0.5, pia: float = 0.5, with_numeric: Optional[bool] = None) -> dict:
    """Bayes factor and posterior at an observed ``t`` next to the risk-optimal cutoff."""
    c_pi = local_density(prior)
    t_crit = threshold_thm1(n, sigma, c_pi, pi0, pia).t_crit
    out = {
        "n": n,
        "t": t,
        "bf01_leading": bf_gaussian_leading(n, t, sigma, c_pi),
        "t_crit": t_crit,
    }
    if prior.proper:
        problem = TestProblem(prior, sigma=sigma, pi0=pi0, pia=pia)
        ev = evidence(problem, problem.xbar_at(t, n), n)
        out["bf01"] = ev.bf01
        out["post_h0"] = ev.post_h0
        if with_numeric or with_numeric is None:
            out["t_crit_numeric"] = threshold_numeric(problem, n).t_crit
    else:
        out["bf01"] = out["bf01_leading"]
        out["post_h0"] = 1.0 / (1.0 + (pia / pi0) / out["bf01"])
    out["verdict"] = "below boundary" if t_crit is not None and abs(t) < t_crit else "above boundary"
    return out
