"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a request exceeds a hard resource cap (e.g. qubit count)."""


class UnsupportedAnsatzError(ValueError):
    """Raised when an operation only defined for one circuit family gets another."""


class UndefinedEstimateError(ValueError):
    """Raised when a statistical estimate is requested from too few samples."""


class NonFiniteObjectiveError(RuntimeError):
    """Objective returned NaN or infinity. Carries the offending parameter vector."""

    def __init__(self, message, params=None):
        super().__init__(message)
        self.params = params
