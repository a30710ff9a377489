"""Exception types shared across the package."""


class NotConvexError(ValueError):
    """Raised when a curve fails its strict convexity certificate."""


class ConditionNotMet(ValueError):
    """Raised when a parameter set violates a required condition block.

    ``line`` names the failed condition line (e.g. ``"eta >= 0"``).
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class UndefinedConstantError(ValueError):
    """Raised when a stability constant has a non-positive denominator."""


class SolverError(RuntimeError):
    """Raised when a minimax solve fails; carries the best feasible bracket."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ReducedAccuracyWarning(RuntimeWarning):
    """Newton polish diverged and a grid value was used instead."""
