"""Exception hierarchy shared by all modules."""


class NumericError(RuntimeError):
    """Base class for numerical failures (CLI exit code 3)."""


class DomainError(ValueError):
    """An argument lies outside the region where the quantity is defined."""


class SolverError(NumericError):
    """A root finder or minimizer failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class QuadratureError(NumericError):
    """Adaptive quadrature did not reach its error target."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NoThresholdError(NumericError):
    """The Bayes factor never crosses the odds cutoff inside the search bracket."""


class UnboundedLocalDensityError(DomainError):
    """The prior density is infinite at the null (horseshoe-type priors)."""


class ImproperPriorError(DomainError):
    """An operation needing a normalized prior received an improper one."""


class DegenerateCorrelationError(DomainError):
    """Bivariate normal correlation too close to +/-1."""
