"""
Fat-Tail Gini Toolkit: tail_ml.py
Description: Indirect Gini estimation through the ML tail exponent, with exact finite-sample laws
Version: 1.0.0

With L known, the ML exponent alpha_hat = n / sum log(x_i / L) is inverse-gamma
with shape n and scale alpha n. The debiased exponent alpha' = (n-1)/n alpha_hat
is inverse-gamma with shape n and scale b = alpha (n-1), so E[alpha'] = alpha.
Conditioning on alpha' > 1 + eps divides by P(n, beta), beta = b / (1 + eps).
The derived Gini is G = 1 / (2 alpha' - 1) on (0, 1/(2 eps + 1)).
"""

# gini/tail_ml.py
import logging
import math
import warnings
from functools import lru_cache
from typing import Iterator, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import settings
from core.errors import (
    DegenerateSampleError,
    DomainError,
    InsufficientDataError,
    RejectedEstimateError,
    SeriesConvergenceWarning,
)
from .direct_estimation import GiniMethod, GiniResult
from .distributions import DistributionSpec, Family, Sample, analytic_gini
from .numerics import log_gamma_kernel, log_reg_gamma_p, reg_gamma_q

logger = logging.getLogger(__name__)


class TailEstimate(BaseModel):
    """ML tail exponent, its debiased version and the truncation verdict"""
    model_config = ConfigDict(frozen=True)

    alpha_hat: float = Field(gt=0)
    alpha_debiased: float = Field(gt=0)
    n: int = Field(ge=2)
    epsilon: float = Field(ge=0)
    accepted: bool
    scale_L: float = Field(gt=0)
    scale_estimated: bool = False

    @model_validator(mode="after")
    def _check_acceptance(self) -> "TailEstimate":
        if self.accepted != (self.alpha_debiased > 1.0 + self.epsilon):
            raise ValueError("accepted must equal alpha_debiased > 1 + epsilon")
        return self

    @classmethod
    def from_alpha_hat(
        cls, alpha_hat: float, n: int, epsilon: float, scale_L: float = 1.0, scale_estimated: bool = False
    ) -> "TailEstimate":
        alpha_debiased = alpha_hat * (n - 1) / n
        return cls(
            alpha_hat=alpha_hat,
            alpha_debiased=alpha_debiased,
            n=n,
            epsilon=epsilon,
            accepted=alpha_debiased > 1.0 + epsilon,
            scale_L=scale_L,
            scale_estimated=scale_estimated,
        )


class DerivedGiniDistribution(BaseModel):
    """Law of the derived Gini for true exponent alpha, sample size n and margin epsilon"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=1, allow_inf_nan=False)
    n: int = Field(ge=2)
    epsilon: float = Field(gt=0, allow_inf_nan=False)

    @property
    def scale(self) -> float:
        """Inverse-gamma scale b = alpha (n - 1) of the debiased exponent"""
        return self.alpha * (self.n - 1)

    @property
    def cutoff(self) -> float:
        return 1.0 + self.epsilon

    @property
    def beta(self) -> float:
        return self.scale / self.cutoff

    @property
    def g_max(self) -> float:
        return 1.0 / (2.0 * self.epsilon + 1.0)

    @property
    def u_max(self) -> float:
        return 1.0 / (2.0 * self.epsilon + 2.0)

    @property
    def log_tail_mass(self) -> float:
        return _log_tail_mass(self.alpha, self.n, self.epsilon)


class MomentSeries(BaseModel):
    """Partial sums of the moment series"""
    m: int
    value: float
    terms_used: int
    converged: bool
    last_term: float
    partial_sums: List[float]


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _count(name: str, value: int, minimum: int) -> int:
    if int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _scalar_or_array(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=1024)
def _log_tail_mass(alpha: float, n: int, epsilon: float) -> float:
    # log P(alpha' > 1 + eps) = log P(n, alpha (n-1) / (1 + eps))
    return log_reg_gamma_p(n, alpha * (n - 1) / (1.0 + epsilon))


def _log_inverse_gamma_pdf(a: np.ndarray, shape: int, scale: float) -> np.ndarray:
    # a > 0; density b^s a^-(s+1) e^(-b/a) / Gamma(s) = kernel(s, b/a) / a
    z = scale / np.asarray(a, dtype=np.float64)
    kernel = np.vectorize(lambda point: log_gamma_kernel(shape, point), otypes=[float])(z)
    return kernel - np.log(a)


def ml_alpha(
    sample: Union[Sample, np.ndarray],
    scale_L: Optional[float] = None,
    epsilon: Optional[float] = None,
) -> TailEstimate:
    """ML tail exponent n / sum log(x_i / L) with its debiased version.

    Without scale_L the sample minimum is used as L and dropped from the
    likelihood; n then counts the remaining observations.
    """
    values = sample.values if isinstance(sample, Sample) else np.asarray(sample, dtype=np.float64).ravel()
    epsilon = settings.default_epsilon if epsilon is None else float(epsilon)
    if not math.isfinite(epsilon) or epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon!r}")
    if values.size == 0:
        raise InsufficientDataError("ML tail fit needs at least 2 values, got 0")

    scale_estimated = scale_L is None
    if scale_estimated:
        lowest = int(np.argmin(values))
        scale_L = float(values[lowest])
        if not scale_L > 0:
            raise DomainError(f"sample minimum {scale_L!r} is not a valid scale L (must be > 0)")
        values = np.delete(values, lowest)
        logger.debug(f"scale L estimated as sample minimum {scale_L!r}; minimum excluded from the likelihood")
    else:
        scale_L = _positive("scale_L", scale_L)
        below = values < scale_L
        if np.any(below):
            raise DomainError(f"{int(np.sum(below))} value(s) lie below scale_L={scale_L!r}")

    n = int(values.size)
    if n < 2:
        raise InsufficientDataError(f"ML tail fit needs at least 2 values in the likelihood, got {n}")

    log_sum = math.fsum(np.log(values / scale_L))
    if log_sum <= 0.0:
        raise DegenerateSampleError("all values equal scale_L: the ML exponent is infinite")

    return TailEstimate.from_alpha_hat(n / log_sum, n, epsilon, scale_L=scale_L, scale_estimated=scale_estimated)


def fit_tail(
    sample: Union[Sample, np.ndarray],
    family: Union[Family, str] = Family.PARETO_I,
    scale: Optional[float] = None,
    epsilon: Optional[float] = None,
) -> TailEstimate:
    """ML fit for either family. Lomax data shifted by lambda is Pareto I with L = lambda."""
    family = Family(family)
    if family is Family.PARETO_I:
        return ml_alpha(sample, scale_L=scale, epsilon=epsilon)
    if scale is None:
        raise DomainError("the Lomax tail fit needs a known scale lambda")
    values = sample.values if isinstance(sample, Sample) else np.asarray(sample, dtype=np.float64)
    return ml_alpha(values + scale, scale_L=scale, epsilon=epsilon)


def pdf_alpha_hat(a, alpha: float, n: int):
    """Inverse-gamma(n, alpha n) density of the raw ML exponent"""
    alpha = _positive("alpha", alpha)
    n = _count("n", n, 1)
    a = np.asarray(a, dtype=np.float64)
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("evaluation points must be finite and > 0")
    return _scalar_or_array(np.exp(_log_inverse_gamma_pdf(a, n, alpha * n)))


def cdf_alpha_hat(a, alpha: float, n: int):
    """P(alpha_hat <= a) = Q(n, alpha n / a)"""
    alpha = _positive("alpha", alpha)
    n = _count("n", n, 1)
    a = np.asarray(a, dtype=np.float64)
    if np.any(np.isnan(a)):
        raise DomainError("evaluation points must not be NaN")
    out = np.vectorize(lambda point: 0.0 if point <= 0 else reg_gamma_q(n, alpha * n / point), otypes=[float])(a)
    return _scalar_or_array(out)


def pdf_alpha_debiased(a, alpha: float, n: int):
    """Inverse-gamma(n, alpha (n-1)) density of the debiased exponent"""
    alpha = _positive("alpha", alpha)
    n = _count("n", n, 2)
    a = np.asarray(a, dtype=np.float64)
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("evaluation points must be finite and > 0")
    return _scalar_or_array(np.exp(_log_inverse_gamma_pdf(a, n, alpha * (n - 1))))


def acceptance_probability(alpha: float, n: int, epsilon: float) -> float:
    """P(alpha' > 1 + epsilon)"""
    alpha = _positive("alpha", alpha)
    n = _count("n", n, 2)
    epsilon = _positive("epsilon", epsilon)
    return math.exp(_log_tail_mass(alpha, n, epsilon))


def pdf_alpha_truncated(a, alpha: float, n: int, epsilon: float):
    """Density of alpha' conditioned on alpha' > 1 + epsilon; zero below the cut"""
    alpha = _positive("alpha", alpha)
    n = _count("n", n, 2)
    epsilon = _positive("epsilon", epsilon)
    a = np.asarray(a, dtype=np.float64)
    if np.any(np.isnan(a)):
        raise DomainError("evaluation points must not be NaN")

    cutoff = 1.0 + epsilon
    inside = (a >= cutoff) & np.isfinite(a)
    safe = np.where(inside, a, cutoff)
    log_pdf = _log_inverse_gamma_pdf(safe, n, alpha * (n - 1)) - _log_tail_mass(alpha, n, epsilon)
    return _scalar_or_array(np.where(inside, np.exp(log_pdf), 0.0))


def derived_gini(estimate: TailEstimate, family: Union[Family, str] = Family.PARETO_I) -> GiniResult:
    """Gini implied by the debiased exponent: 1/(2a - 1) (Pareto I), a/(2a - 1) (Lomax)"""
    if not estimate.accepted:
        raise RejectedEstimateError(
            f"alpha'={estimate.alpha_debiased!r} <= 1 + epsilon={1.0 + estimate.epsilon!r}: "
            "values of alpha <= 1 lead to infinite mean (hence no Gini)",
            estimate=estimate,
        )
    family = Family(family)
    a = estimate.alpha_debiased
    value = 1.0 / (2.0 * a - 1.0) if family is Family.PARETO_I else a / (2.0 * a - 1.0)
    return GiniResult(
        value=value,
        method=GiniMethod.ML_DERIVED,
        n=estimate.n,
        epsilon=estimate.epsilon,
        metadata={
            "family": family.value,
            "alpha_hat": estimate.alpha_hat,
            "alpha_debiased": a,
            "scale_L": estimate.scale_L,
            "scale_estimated": estimate.scale_estimated,
        },
    )


def analytic_gini_result(spec: DistributionSpec) -> GiniResult:
    return GiniResult(
        value=analytic_gini(spec),
        method=GiniMethod.ANALYTIC,
        n=0,
        metadata={"family": spec.family.value, "alpha": spec.alpha},
    )


def pdf_derived_gini(g, dist: DerivedGiniDistribution):
    """Density of the derived Gini on (0, 1/(2 eps + 1))"""
    g = np.asarray(g, dtype=np.float64)
    if np.any(np.isnan(g)):
        raise DomainError("evaluation points must not be NaN")

    n = dist.n
    b = dist.scale
    inside = (g > 0) & (g < dist.g_max)
    safe = np.where(inside, g, 0.5 * dist.g_max)
    # z = 2 b g / (1 + g): density = kernel(n, z) / (g (1 + g)) / tail mass
    z = 2.0 * b * safe / (1.0 + safe)
    kernel = np.vectorize(lambda point: log_gamma_kernel(n, point), otypes=[float])(z)
    log_pdf = kernel - np.log(safe) - np.log1p(safe) - dist.log_tail_mass
    return _scalar_or_array(np.where(inside, np.exp(log_pdf), 0.0))


def _moment_log_terms(m: int, dist: DerivedGiniDistribution) -> Iterator[float]:
    # term_i = C(i+m-1, i) (2b)^-(i+m) Gamma(n+m+i) P(n+m+i, beta) / (Gamma(n) P(n, beta))
    n = dist.n
    x = dist.beta
    log_two_b = math.log(2.0 * dist.scale)
    log_x = math.log(x)

    s = n + m
    log_coeff = math.fsum(math.log(n + k) for k in range(m)) - m * log_two_b
    log_p = log_reg_gamma_p(s, x)
    # log(x^s e^-x / s!)
    log_pmf = log_gamma_kernel(s + 1, x) - log_x
    log_tail = dist.log_tail_mass
    i = 0
    while True:
        yield log_coeff + log_p - log_tail

        log_coeff += math.log((i + m) / (i + 1)) + math.log(s) - log_two_b
        # P(s + 1, x) = P(s, x) - x^s e^-x / s!
        drop = math.exp(log_pmf - log_p)
        if drop < 0.5:
            log_p += math.log1p(-drop)
        else:
            log_p = log_reg_gamma_p(s + 1, x)
        log_pmf += log_x - math.log(s + 1)
        s += 1
        i += 1


def moment_partial_sums(m: int, dist: DerivedGiniDistribution, terms_U: int) -> List[float]:
    """Partial sums of the mu(m) series for U = 1 .. terms_U"""
    m = _count("m", m, 1)
    terms_U = _count("terms_U", terms_U, 1)
    sums = []
    partial = 0.0
    for log_term in _moment_log_terms(m, dist):
        partial += math.exp(log_term)
        sums.append(partial)
        if len(sums) == terms_U:
            return sums
    return sums


def gini_moment(
    m: int,
    dist: DerivedGiniDistribution,
    terms_U: Optional[int] = None,
    rel_tol: Optional[float] = None,
) -> MomentSeries:
    """mu(m) = E[G^m] of the derived Gini by the binomial series.

    Stops after terms_U terms or once a term falls below rel_tol times the
    partial sum. Stopping on terms_U with a larger last term warns with
    SeriesConvergenceWarning.
    """
    m = _count("m", m, 1)
    terms_U = settings.moment_terms if terms_U is None else _count("terms_U", terms_U, 1)
    rel_tol = settings.moment_rel_tol if rel_tol is None else float(rel_tol)

    sums: List[float] = []
    partial = 0.0
    term = math.nan
    converged = False
    for log_term in _moment_log_terms(m, dist):
        term = math.exp(log_term)
        partial += term
        sums.append(partial)
        if term <= rel_tol * partial:
            converged = True
            break
        if len(sums) >= terms_U:
            break

    if not converged:
        message = (
            f"moment series mu({m}) not converged after {len(sums)} terms "
            f"(last term {term!r}, partial sum {partial!r})"
        )
        logger.warning(message)
        warnings.warn(SeriesConvergenceWarning(message, partial_sum=partial, terms_used=len(sums)), stacklevel=2)

    return MomentSeries(
        m=m, value=partial, terms_used=len(sums), converged=converged, last_term=term, partial_sums=sums
    )


def gini_std(
    dist: DerivedGiniDistribution,
    terms_U: Optional[int] = None,
    rel_tol: Optional[float] = None,
) -> float:
    """Standard deviation of the derived Gini, sqrt(mu(2) - mu(1)^2)"""
    first = gini_moment(1, dist, terms_U, rel_tol).value
    second = gini_moment(2, dist, terms_U, rel_tol).value
    return math.sqrt(max(second - first * first, 0.0))
