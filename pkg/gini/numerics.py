"""
Fat-Tail Gini Toolkit: numerics.py
Description: Log-space special functions and survival quadrature used by the analytic formulas
Version: 1.0.0

The incomplete gamma functions are only ever used in regularized form:
Gamma(s) - Gamma(s, x) = Gamma(s) * P(s, x). Unregularized values overflow for
s above ~170, and the sample sizes here go to 10**6. P and Q come from
scipy.special; their logs fall back to a log-space series or continued fraction
only where scipy underflows to zero.
"""

# gini/numerics.py
import logging
import math
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate, special

from config.settings import settings
from core.errors import DomainError, QuadratureError, SeriesConvergenceError

logger = logging.getLogger(__name__)

_FPMIN = 1e-300
_EPS = float(np.finfo(float).eps)
_TINY = float(np.finfo(float).tiny)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _require_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def log_gamma(s: float) -> float:
    """ln Gamma(s) for finite s > 0."""
    s = _require_positive("log_gamma argument", s)
    return float(special.gammaln(s))


# Stirling series coefficients of ln Gamma(s) - [(s - 1/2) ln s - s + ln(2 pi) / 2]
_STIRLING = (1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0)
_STIRLING_MIN = 10.0
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_remainder(s: float) -> float:
    inv = 1.0 / s
    inv2 = inv * inv
    total = 0.0
    power = inv
    for coeff in _STIRLING:
        total += coeff * power
        power *= inv2
    return total


def _log1p_minus(t: float) -> float:
    # log(1 + t) - t
    if abs(t) > 0.25:
        return math.log1p(t) - t
    total = 0.0
    power = t * t
    k = 2
    while True:
        term = power / k
        total += -term if k % 2 == 0 else term
        if abs(term) <= _EPS * abs(total):
            return total
        power *= t
        k += 1


def log_gamma_kernel(s: float, x: float) -> float:
    """log(x^s e^-x / Gamma(s)) for s, x > 0.

    For large s the terms s ln x, x and ln Gamma(s) are each far larger than
    the result, so it is assembled from ln(x/s) and the Stirling remainder.
    """
    s = _require_positive("shape", s)
    x = _require_positive("cutoff", x)
    if s < _STIRLING_MIN:
        return s * math.log(x) - x - log_gamma(s)
    return (
        s * _log1p_minus((x - s) / s)
        + 0.5 * math.log(s)
        - _HALF_LOG_TWO_PI
        - _stirling_remainder(s)
    )


def _log_p_series(s: float, x: float, threshold: float, max_iter: int) -> float:
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * threshold:
            return log_gamma_kernel(s, x) + math.log(total)
    raise SeriesConvergenceError(
        f"incomplete gamma series did not converge for s={s!r}, x={x!r} in {max_iter} iterations"
    )
def _log_q_continued_fraction(s: float, x: float, threshold: float, max_iter: int) -> float:
    # Modified Lentz evaluation of the Legendre continued fraction for Q(s, x)
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < threshold:
            return log_gamma_kernel(s, x) + math.log(h)
    raise SeriesConvergenceError(
        f"incomplete gamma continued fraction did not converge for s={s!r}, x={x!r} in {max_iter} iterations"
    )


def _controls(tol: Optional[float], max_iter: Optional[int]):
    tol = settings.special_tol if tol is None else tol
    max_iter = settings.special_max_iter if max_iter is None else max_iter
    # Stop increments well below the requested absolute accuracy
    return max(_EPS, tol * 1e-4), max_iter


def log_reg_gamma_p(s: float, x: float, tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """log P(s, x); -inf at x = 0.

    Taken from scipy while P is representable. Where P underflows, the
    log-space series (or the continued fraction for the complement) is used;
    tol and max_iter control only that fallback.
    """
    s = _require_positive("shape", s)
    x = _require_nonnegative("cutoff", x)
    if x == 0.0:
        return -math.inf
    q = float(special.gammaincc(s, x))
    if q <= 0.5:
        return math.log1p(-q)
    p = float(special.gammainc(s, x))
    if p >= _TINY:
        return math.log(p)
    threshold, max_iter = _controls(tol, max_iter)
    if x < s + 1.0:
        return _log_p_series(s, x, threshold, max_iter)
    return math.log1p(-math.exp(_log_q_continued_fraction(s, x, threshold, max_iter)))


def log_reg_gamma_q(s: float, x: float, tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """log Q(s, x); 0 at x = 0. Same fallback as log_reg_gamma_p."""
    s = _require_positive("shape", s)
    x = _require_nonnegative("cutoff", x)
    if x == 0.0:
        return 0.0
    p = float(special.gammainc(s, x))
    if p <= 0.5:
        return math.log1p(-p)
    q = float(special.gammaincc(s, x))
    if q >= _TINY:
        return math.log(q)
    threshold, max_iter = _controls(tol, max_iter)
    if x >= s + 1.0:
        return _log_q_continued_fraction(s, x, threshold, max_iter)
    return math.log1p(-math.exp(_log_p_series(s, x, threshold, max_iter)))


def reg_gamma_p(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) in [0, 1]."""
    s = _require_positive("shape", s)
    x = _require_nonnegative("cutoff", x)
    return float(special.gammainc(s, x))


def reg_gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    s = _require_positive("shape", s)
    x = _require_nonnegative("cutoff", x)
    return float(special.gammaincc(s, x))


class LogRegularizedGamma(BaseModel):
    """P and Q at a fixed (shape, cutoff) pair"""
    model_config = ConfigDict(frozen=True)

    shape: float = Field(gt=0)
    cutoff: float = Field(ge=0)

    @property
    def log_p(self) -> float:
        return log_reg_gamma_p(self.shape, self.cutoff)

    @property
    def log_q(self) -> float:
        return log_reg_gamma_q(self.shape, self.cutoff)

    @property
    def p(self) -> float:
        return reg_gamma_p(self.shape, self.cutoff)

    @property
    def q(self) -> float:
        return reg_gamma_q(self.shape, self.cutoff)


def integrate_survival_squared(
    survival: Callable[[float], float],
    lower: float,
    mean: float,
    tol: Optional[float] = None,
    limit: Optional[int] = None,
) -> float:
    """Gini of a nonnegative variable from its survival function.

    Uses E min(X, X') = lower + int_lower^inf S(x)^2 dx, so that
    G = 1 - (lower + int_lower^inf S(x)^2 dx) / mean. The tail is mapped onto
    (0, 1] by x = lower + c (1 - t) / t, with c = lower (i.e. x = lower / t)
    when lower > 0 and c = 1 otherwise.
    """
    lower = _require_nonnegative("lower", lower)
    mean = _require_positive("mean", mean)
    tol = settings.quad_tol if tol is None else tol
    limit = settings.quad_limit if limit is None else limit
    scale = lower if lower > 0.0 else 1.0

    def integrand(t: float) -> float:
        x = lower + scale * (1.0 - t) / t
        s = survival(x)
        if s == 0.0:
            return 0.0
        return s * s * scale / (t * t)

    result = integrate.quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    value, abserr = float(result[0]), float(result[1])
    if len(result) > 3:
        raise QuadratureError(
            f"survival quadrature did not converge: {result[3]} (last value {value!r} +/- {abserr!r})",
            bracket=(value, abserr),
        )

    logger.debug(f"survival quadrature: integral={value!r} abserr={abserr!r} evaluations={result[2]['neval']}")
    return 1.0 - (lower + value) / mean
