"""Exception types shared across the package."""


class RieszmaxError(Exception):
    """Base class for all package errors."""


class DomainError(RieszmaxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedDimensionError(DomainError):
    """The ambient dimension is outside the supported envelope of an operation."""


class AccuracyError(RieszmaxError, RuntimeError):
    """A quadrature or iteration did not reach the requested tolerance.

    Carries the best available estimate so callers can still inspect it.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ResourceError(RieszmaxError, RuntimeError):
    """A requested computation exceeds the configured memory/size budget."""


class IntegrityError(RieszmaxError, RuntimeError):
    """Merged report rows disagree for the same (experiment, seed) key."""
