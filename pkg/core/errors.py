"""
Fat-Tail Gini Toolkit: errors.py
Description: Exception hierarchy shared by the library and the command line
Version: 1.0.0
"""

# core/errors.py
from typing import Any, Optional, Tuple


class GiniToolkitError(ValueError):
    """Base class for every error raised by the toolkit"""

    exit_code = 1


class InputError(GiniToolkitError):
    """Unreadable or malformed input"""

    exit_code = 2


class DomainError(InputError):
    """Argument outside the domain of the operation"""


class InsufficientDataError(InputError):
    """Too few observations"""


class DegenerateSampleError(InputError):
    """Sample carries no information for the estimator (zero sum, all at L)"""


class StatisticalRejectionError(GiniToolkitError):
    """The estimate exists but implies no finite Gini"""

    exit_code = 3


class UndefinedMeanError(StatisticalRejectionError):
    """Tail exponent alpha <= 1: infinite mean, hence no Gini"""


class RejectedEstimateError(StatisticalRejectionError):
    """Debiased ML exponent did not clear the 1 + epsilon cut"""

    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class NumericError(GiniToolkitError):
    """A numerical procedure did not converge"""

    exit_code = 4


class QuadratureError(NumericError):
    """Adaptive quadrature exhausted its subinterval budget"""

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None):
        super().__init__(message)
        self.bracket = bracket


class SeriesConvergenceError(NumericError):
    """Series or continued fraction exhausted its iteration budget"""


class SeriesConvergenceWarning(RuntimeWarning):
    """Moment series stopped before its terms fell below the tolerance"""

    def __init__(self, message: str, partial_sum: float = float("nan"), terms_used: int = 0):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used
