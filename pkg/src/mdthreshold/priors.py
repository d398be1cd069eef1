"""Alternative-hypothesis prior densities and their local behaviour at the null.

Prior grammar (CLI / config)::

    cauchy:loc,scale | gaussian:mu,tau | student_t:loc,scale,df | flat:c_pi | horseshoe:scale
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import SQRT2PI
from .errors import DomainError, ImproperPriorError, UnboundedLocalDensityError

KINDS = ("gaussian", "cauchy", "student_t", "flat_local", "horseshoe_local")
_GRAMMAR_ALIASES = {"flat": "flat_local", "horseshoe": "horseshoe_local", "normal": "gaussian",
                    "t": "student_t"}
_ARITY = {"gaussian": 2, "cauchy": 2, "student_t": 3, "flat_local": 1, "horseshoe_local": 1}


@dataclass(frozen=True)
class PriorSpec:
    """A prior on the parameter under the alternative.

    ``params`` holds the kind-specific parameters in grammar order, e.g.
    ``(loc, scale)`` for ``cauchy``.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown prior kind {self.kind!r}")
        if len(self.params) != _ARITY[self.kind]:
            raise DomainError(f"{self.kind} takes {_ARITY[self.kind]} parameters")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind == "flat_local":
            if not 0.0 < self.params[0] < math.inf:
                raise DomainError("flat_local c_pi must be positive and finite")
        elif self.scale <= 0:
            raise DomainError("prior scale must be positive")
        if self.kind == "student_t" and self.params[2] <= 0:
            raise DomainError("student_t df must be positive")

    # -- descriptive properties -------------------------------------------------
    @property
    def proper(self) -> bool:
        return self.kind in ("gaussian", "cauchy", "student_t")

    @property
    def regular(self) -> bool:
        """True when the density is finite and positive everywhere."""
        return self.kind != "horseshoe_local"

    @property
    def center(self) -> float:
        return 0.0 if self.kind in ("flat_local", "horseshoe_local") else self.params[0]

    @property
    def scale(self) -> float:
        if self.kind == "flat_local":
            return math.inf
        if self.kind == "horseshoe_local":
            return self.params[0]
        return self.params[1]

    @property
    def max_density(self) -> float:
        """Supremum of the density (attained at the center for the proper kinds)."""
        if self.kind == "horseshoe_local":
            return math.inf
        if self.kind == "flat_local":
            return self.params[0]
        return float(self.density(self.center))

    def __str__(self):
        name = {"flat_local": "flat", "horseshoe_local": "horseshoe"}.get(self.kind, self.kind)
        return f"{name}:" + ",".join(f"{p:g}" for p in self.params)

    # -- evaluation -------------------------------------------------------------
    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        k, p = self.kind, self.params
        if k == "gaussian":
            z = (theta - p[0]) / p[1]
            out = np.exp(-0.5 * z * z) / (SQRT2PI * p[1])
        elif k == "cauchy":
            z = (theta - p[0]) / p[1]
            out = 1.0 / (math.pi * p[1] * (1.0 + z * z))
        elif k == "student_t":
            loc, s, df = p
            z = (theta - loc) / s
            lognorm = (math.lgamma(0.5 * (df + 1)) - math.lgamma(0.5 * df)
                       - 0.5 * math.log(df * math.pi) - math.log(s))
            out = np.exp(lognorm - 0.5 * (df + 1) * np.log1p(z * z / df))
        elif k == "flat_local":
            out = np.full_like(theta, p[0])
        else:
            with np.errstate(divide="ignore", over="ignore"):
                out = np.log1p(np.square(p[0] / theta))
        return float(out) if out.ndim == 0 else out

    def __call__(self, theta):
        return self.density(theta)

    def d1(self, x: float) -> float:
        """First derivative of the density at ``x``."""
        return taylor_at(self, x)[1]

    def d2(self, x: float) -> float:
        """Second derivative of the density at ``x``."""
        return taylor_at(self, x)[2]


def gaussian_prior(mu: float = 0.0, tau: float = 1.0) -> PriorSpec:
    return PriorSpec("gaussian", (mu, tau))


def cauchy_prior(loc: float = 0.0, scale: float = 1.0) -> PriorSpec:
    return PriorSpec("cauchy", (loc, scale))


def student_t_prior(loc: float = 0.0, scale: float = 1.0, df: float = 3.0) -> PriorSpec:
    return PriorSpec("student_t", (loc, scale, df))


def flat_local(c_pi: float) -> PriorSpec:
    """Improper device that only carries the local density value."""
    return PriorSpec("flat_local", (c_pi,))


def horseshoe_local(scale: float = 1.0) -> PriorSpec:
    """Unnormalized local horseshoe shape ``log(1 + (scale/theta)^2)``."""
    return PriorSpec("horseshoe_local", (scale,))


def parse_prior(text: str) -> PriorSpec:
    """Parse ``kind:p1,p2,...`` (see module docstring)."""
    if ":" not in text:
        raise DomainError(f"prior {text!r} must look like kind:params")
    head, _, tail = text.strip().partition(":")
    kind = _GRAMMAR_ALIASES.get(head.strip().lower(), head.strip().lower())
    try:
        params = tuple(float(v) for v in tail.split(",") if v.strip())
    except ValueError as exc:
        raise DomainError(f"bad prior parameters in {text!r}") from exc
    return PriorSpec(kind, params)


def require_proper(prior: PriorSpec) -> None:
    if not prior.proper:
        raise ImproperPriorError(f"{prior.kind} prior is not normalizable; a proper prior is required")


def local_density(prior: PriorSpec, theta0: float = 0.0) -> float:
    """``c_pi = pi(theta0)``, the prior density at the null."""
    if not prior.regular:
        raise UnboundedLocalDensityError(
            "horseshoe-type prior has infinite density at the null; use threshold_horseshoe")
    return float(prior.density(theta0))


def _fd_derivatives(f, x: float) -> tuple[float, float]:
    h1 = 1e-5 * max(1.0, abs(x))
    d1 = (f(x + h1) - f(x - h1)) / (2.0 * h1)
    # a 1e-5 step leaves ~1e-6 relative roundoff in the second difference;
    # the five-point stencil at a wider step keeps it near 1e-9
    h2 = 1e-3 * max(1.0, abs(x))
    d2 = (-f(x + 2 * h2) + 16 * f(x + h2) - 30 * f(x) + 16 * f(x - h2) - f(x - 2 * h2)) / (12 * h2 * h2)
    return d1, d2


def taylor_at(prior: PriorSpec, x: float, analytic: bool = True) -> tuple[float, float, float]:
    """Density and its first two derivatives at ``x``.

    Closed forms for gaussian/cauchy/flat; central finite differences otherwise
    (or when ``analytic=False``).
    """
    if not prior.regular:
        raise UnboundedLocalDensityError("taylor_at requires a regular prior")
    x = float(x)
    pi0 = float(prior.density(x))
    if analytic and prior.kind == "flat_local":
        return pi0, 0.0, 0.0
    if analytic and prior.kind == "gaussian":
        mu, tau = prior.params
        z = (x - mu) / tau
        return pi0, -z / tau * pi0, (z * z - 1.0) / (tau * tau) * pi0
    if analytic and prior.kind == "cauchy":
        loc, s = prior.params
        z = (x - loc) / s
        u = 1.0 + z * z
        c = 1.0 / (math.pi * s)
        return pi0, -2.0 * z * c / (s * u * u), c * (6.0 * z * z - 2.0) / (s * s * u ** 3)
    d1, d2 = _fd_derivatives(lambda v: float(prior.density(v)), x)
    return pi0, d1, d2
