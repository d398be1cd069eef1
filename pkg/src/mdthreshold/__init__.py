"""Bayes-risk-optimal rejection thresholds for point-null testing on the
moderate deviation scale, with exact, quadrature and Monte Carlo checks."""

from .errors import (DomainError, NoThresholdError, NumericError, QuadratureError,
                     SolverError, UnboundedLocalDensityError)
from .model_core import (ModelFamily, RateFunctionResult, bernoulli, chernoff_bound_binomial,
                         gaussian, rate_function, saddlepoint_density)
from .priors import (PriorSpec, cauchy_prior, flat_local, gaussian_prior, horseshoe_local,
                     local_density, parse_prior, student_t_prior, taylor_at)
from .evidence import (EvidenceResult, TestProblem, bf_expfam_leading, bf_gaussian_leading,
                       evidence, marginal_quadrature)
from .thresholds import (ThresholdResult, threshold_horseshoe, threshold_numeric, threshold_rs,
                         threshold_thm1, threshold_thm2)
from .tails import (RegimeLabel, TailEstimate, classify_regime, lindley_alpha, mc_tail,
                    tail_exact_gaussian, tail_lemma1)
from .risk import (ChernoffResult, RiskCurve, SimpleHypothesis, chernoff_information,
                   efron_truax_error, risk_curve, risk_optimal_boundary, scoring_risk)
from .asymptotics_lab import LabReport, bic_gap, dawid_check

__version__ = "0.1.0"
