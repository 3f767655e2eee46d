"""Exception hierarchy shared across the package.

Every error raised deliberately by this package derives from
:class:`TprocError`, so callers can catch one type at the boundary.  The
command-line driver maps subtrees of this hierarchy onto exit codes.
"""


class TprocError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TprocError):
    """A configuration file or option set is malformed or inconsistent."""


class DataError(TprocError):
    """An input dataset is malformed (bad shape, non-finite rows, ...)."""


class DimensionMismatch(TprocError):
    """Array arguments have incompatible shapes."""


class DomainError(TprocError):
    """A parameter lies outside its mathematical domain (e.g. dof <= 2)."""


class NumericError(TprocError):
    """Base class for runtime numerical failures."""


class NotPositiveDefinite(NumericError):
    """A matrix required to be positive definite is not, even after jitter."""


class NonFiniteDensity(NumericError):
    """A log-density evaluated to NaN where a finite value or -inf was required."""


class ConvergenceFailure(NumericError):
    """An iterative routine failed to reach its stopping criterion."""


class AllRestartsFailed(ConvergenceFailure):
    """Every optimizer restart failed; no usable optimum is available."""


class ObjectiveFailure(TprocError):
    """A user-supplied objective returned a non-finite value."""


class VerificationFailure(TprocError):
    """A distributional verification check did not pass."""
