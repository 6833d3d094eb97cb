"""Exception types shared across the package."""


class MirrorCorrError(Exception):
    """Base class for all package errors."""


class DomainError(MirrorCorrError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(MirrorCorrError, ValueError):
    """A configuration file is malformed, has unknown keys, or misses required ones."""


class ConvergenceError(MirrorCorrError, RuntimeError):
    """A numerical procedure failed to reach the requested tolerance.

    Carries the best available estimate and its error bar so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message, best_estimate=None, est_abs_err=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.est_abs_err = est_abs_err


class BasisSizeError(MirrorCorrError, ValueError):
    """A truncated Fock basis would exceed the configured memory budget."""

    def __init__(self, message, dimension):
        super().__init__(message)
        self.dimension = dimension


class FitError(MirrorCorrError, RuntimeError):
    """A power-law fit exceeded its residual threshold.

    The offending (x, y) data is attached for diagnostics.
    """

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data
