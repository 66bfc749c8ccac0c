"""Exception hierarchy shared by all modules."""


class UniversalSeriesError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(UniversalSeriesError):
    """Invalid run configuration; ``field`` names the offending location."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class GridSizeError(ConfigError):
    """A sample grid would exceed the configured point cap."""


class InvalidTransformError(UniversalSeriesError):
    """A transform row has a (numerically) zero diagonal entry."""


class ConditioningError(UniversalSeriesError):
    """Least-squares basis became rank deficient at ``degree``."""

    def __init__(self, message, degree=None, variable=None):
        self.degree = degree
        self.variable = variable
        super().__init__(message)


class ApproximationFailure(UniversalSeriesError):
    """Degree budget exhausted before the tolerance was certified."""

    def __init__(self, message, best_error=float("inf"), trace=()):
        self.best_error = best_error
        self.trace = list(trace)
        super().__init__(message)


class JobRejected(UniversalSeriesError):
    """A job violates a structural requirement (e.g. every factor contains 0)."""


class JobFailed(UniversalSeriesError):
    """A job could not be certified; carries the job index when known."""

    def __init__(self, message, job_index=None, cause=None):
        self.job_index = job_index
        self.cause = cause
        super().__init__(message)


class PrecisionError(UniversalSeriesError):
    """Requested evaluation accuracy is out of reach at the precision cap."""


class TargetDomainError(UniversalSeriesError):
    """Target is not declared holomorphic near the requested compacta."""
