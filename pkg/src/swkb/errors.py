"""Exception hierarchy shared by all modules."""


class SwkbError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SwkbError, ValueError):
    """Position or argument outside the admissible domain."""


class ParameterError(SwkbError, ValueError):
    """Invalid potential parameter or unknown catalog entry."""


class SpectrumExhaustedError(SwkbError, IndexError):
    """Requested level lies beyond the last bound state."""


class RangeError(SwkbError, ValueError):
    """Energy outside the range where the counting function is defined."""


class ClassificationError(SwkbError, ValueError):
    """Barclay coefficients inconsistent with the superpotential."""


class NoClassicalMotionError(SwkbError, ValueError):
    """Energy lies below the minimum of the curve."""


class ConfigurationError(SwkbError, ValueError):
    """Inconsistent numerical configuration (grid, tolerances)."""


class NumericError(SwkbError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy.

    ``best_estimate`` carries the last value computed, when one exists.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ConvergenceError(NumericError):
    """A series could not be summed to the requested tolerance."""


class TruncationError(NumericError):
    """Finite box too small for the requested eigenvalues."""
