"""
Fat-Tail Gini Toolkit: distributions.py
Description: Pareto I and Lomax (Pareto II) distributions, samples and analytic Gini
Version: 1.0.0
"""

# gini/distributions.py
import logging
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.errors import DomainError, InsufficientDataError, UndefinedMeanError
from .numerics import integrate_survival_squared

logger = logging.getLogger(__name__)

# 2**-53 grid; offset by half a step so that 0 and 1 are never drawn
_UNIFORM_BITS = 53
_UNIFORM_STEP = 2.0 ** -_UNIFORM_BITS


class Family(str, Enum):
    """Supported fat-tailed families"""
    PARETO_I = "pareto-I"
    LOMAX = "lomax"


class ParetoSpec(BaseModel):
    """Pareto I: density alpha L^alpha x^(-alpha-1) on x > L"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0, allow_inf_nan=False)
    scale_L: float = Field(gt=0, allow_inf_nan=False)

    @property
    def family(self) -> Family:
        return Family.PARETO_I

    @property
    def lower(self) -> float:
        return self.scale_L


class LomaxSpec(BaseModel):
    """Lomax: survival (1 + x/lambda)^(-alpha) on x >= 0"""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0, allow_inf_nan=False)
    scale_lambda: float = Field(1.0, gt=0, allow_inf_nan=False)

    @property
    def family(self) -> Family:
        return Family.LOMAX

    @property
    def lower(self) -> float:
        return 0.0


DistributionSpec = Union[ParetoSpec, LomaxSpec]


class Sample(BaseModel):
    """Observations with provenance.

    Values are finite and nonnegative; operations that need strictly positive
    data (the ML tail fit) check it themselves.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    source: str = "memory"
    seed_info: Optional[Dict[str, Any]] = None

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=np.float64).ravel()
        if array.size < 1:
            raise InsufficientDataError("a sample needs at least one value")
        if not np.all(np.isfinite(array)):
            raise DomainError("sample values must be finite")
        if np.any(array < 0):
            raise DomainError("sample values must be nonnegative")
        array.flags.writeable = False
        return array

    def __len__(self) -> int:
        return int(self.values.size)


def make_spec(family: Union[Family, str], alpha: float, scale: float = 1.0) -> DistributionSpec:
    """Build a spec for the named family"""
    family = Family(family)
    if family is Family.PARETO_I:
        return ParetoSpec(alpha=alpha, scale_L=scale)
    return LomaxSpec(alpha=alpha, scale_lambda=scale)


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms strictly inside (0, 1)"""
    draws = rng.integers(0, 2 ** _UNIFORM_BITS, size=n, dtype=np.uint64)
    return (draws.astype(np.float64) + 0.5) * _UNIFORM_STEP


def pareto_pdf(spec: ParetoSpec, x):
    x = np.asarray(x, dtype=np.float64)
    inside = x >= spec.scale_L
    safe = np.where(inside, x, spec.scale_L)
    density = spec.alpha * spec.scale_L ** spec.alpha * safe ** (-spec.alpha - 1.0)
    out = np.where(inside, density, 0.0)
    return float(out) if out.ndim == 0 else out


def pareto_survival(spec: ParetoSpec, x):
    x = np.asarray(x, dtype=np.float64)
    safe = np.maximum(x, spec.scale_L)
    out = (spec.scale_L / safe) ** spec.alpha
    return float(out) if out.ndim == 0 else out


def pareto_cdf(spec: ParetoSpec, x):
    return 1.0 - pareto_survival(spec, x)


def lomax_pdf(spec: LomaxSpec, x):
    x = np.asarray(x, dtype=np.float64)
    inside = x >= 0
    safe = np.where(inside, x, 0.0)
    density = spec.alpha / spec.scale_lambda * (1.0 + safe / spec.scale_lambda) ** (-spec.alpha - 1.0)
    out = np.where(inside, density, 0.0)
    return float(out) if out.ndim == 0 else out


def lomax_survival(spec: LomaxSpec, x):
    x = np.asarray(x, dtype=np.float64)
    safe = np.maximum(x, 0.0)
    out = (1.0 + safe / spec.scale_lambda) ** (-spec.alpha)
    return float(out) if out.ndim == 0 else out


def lomax_cdf(spec: LomaxSpec, x):
    return 1.0 - lomax_survival(spec, x)


def survival(spec: DistributionSpec, x):
    if isinstance(spec, ParetoSpec):
        return pareto_survival(spec, x)
    return lomax_survival(spec, x)


def cdf(spec: DistributionSpec, x):
    if isinstance(spec, ParetoSpec):
        return pareto_cdf(spec, x)
    return lomax_cdf(spec, x)


def distribution_mean(spec: DistributionSpec) -> float:
    """Mean; alpha <= 1 has none."""
    if spec.alpha <= 1.0:
        raise UndefinedMeanError(
            f"alpha={spec.alpha!r} <= 1: values of alpha <= 1 lead to infinite mean (hence no Gini)"
        )
    if isinstance(spec, ParetoSpec):
        return spec.alpha * spec.scale_L / (spec.alpha - 1.0)
    return spec.scale_lambda / (spec.alpha - 1.0)


def _check_count(n: int) -> int:
    if int(n) != n or n < 1:
        raise InsufficientDataError(f"sample size must be a positive integer, got {n!r}")
    return int(n)


def sample_pareto(spec: ParetoSpec, n: int, rng: np.random.Generator) -> Sample:
    """Inverse transform: X = L U^(-1/alpha)"""
    n = _check_count(n)
    u = open_uniform(rng, n)
    values = spec.scale_L * np.exp(-np.log(u) / spec.alpha)
    return Sample(values=values, source=f"simulated:{Family.PARETO_I.value}")


def sample_lomax(spec: LomaxSpec, n: int, rng: np.random.Generator) -> Sample:
    """Inverse transform: X = lambda ((1 - U)^(-1/alpha) - 1)"""
    n = _check_count(n)
    u = open_uniform(rng, n)
    values = spec.scale_lambda * np.expm1(-np.log1p(-u) / spec.alpha)
    return Sample(values=values, source=f"simulated:{Family.LOMAX.value}")


def sample(spec: DistributionSpec, n: int, rng: np.random.Generator) -> Sample:
    if isinstance(spec, ParetoSpec):
        return sample_pareto(spec, n, rng)
    return sample_lomax(spec, n, rng)


def analytic_gini(spec: DistributionSpec) -> float:
    """Closed-form Gini: 1/(2a-1) for Pareto I, a/(2a-1) for Lomax."""
    distribution_mean(spec)  # raises for alpha <= 1
    if isinstance(spec, ParetoSpec):
        return 1.0 / (2.0 * spec.alpha - 1.0)
    return spec.alpha / (2.0 * spec.alpha - 1.0)


def quadrature_gini(spec: DistributionSpec, tol: Optional[float] = None) -> float:
    """Gini of the distribution by survival-squared quadrature"""
    mean = distribution_mean(spec)
    return integrate_survival_squared(lambda x: survival(spec, x), spec.lower, mean, tol=tol)
