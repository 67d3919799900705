"""
Fat-Tail Gini Toolkit: direct_estimation.py
Description: Empirical ("direct") Gini estimators
Version: 1.0.0

Canonical estimator (pair-unbiased):

    G = sum_i sum_j |Y_i - Y_j| / (2 (n - 1) sum_i Y_i)

The plugin normalization divides by 2 n sum_i Y_i instead. The fast path uses
sum_i sum_j |Y_i - Y_j| = 2 sum_i (2i - n - 1) Y_(i) over the ascending order
statistics, with the same denominator as the pairwise path.
"""

# gini/direct_estimation.py
import logging
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config.settings import settings
from core.errors import DegenerateSampleError, DomainError, InsufficientDataError
from .distributions import Sample

logger = logging.getLogger(__name__)


class GiniMethod(str, Enum):
    DIRECT_PAIRWISE = "direct-pairwise"
    DIRECT_ORDERED = "direct-ordered"
    ML_DERIVED = "ml-derived"
    ANALYTIC = "analytic"


class Normalization(str, Enum):
    PAIR_UNBIASED = "pair-unbiased"
    PLUGIN = "plugin"


class GiniResult(BaseModel):
    """A Gini value with the method and normalization that produced it"""
    model_config = ConfigDict(frozen=True, use_enum_values=True)

    value: float
    method: GiniMethod
    n: int
    normalization: Optional[Normalization] = None
    epsilon: Optional[float] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)


class UnionGiniResult(BaseModel):
    """Pooled Gini next to the size-weighted average of its parts"""
    model_config = ConfigDict(frozen=True)

    pooled: GiniResult
    parts: List[GiniResult]
    weighted_average: float

    @property
    def gap(self) -> float:
        return self.pooled.value - self.weighted_average


SampleLike = Union[Sample, Sequence[float], np.ndarray]


def _values(sample: SampleLike) -> np.ndarray:
    values = sample.values if isinstance(sample, Sample) else np.asarray(sample, dtype=np.float64).ravel()
    if values.size < 2:
        raise InsufficientDataError(f"direct Gini needs at least 2 values, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise DomainError("values must be finite")
    if np.any(values < 0):
        raise DomainError("direct Gini is defined for nonnegative values only")
    return values


def _denominator(n: int, total: float, normalization: Normalization) -> float:
    if total <= 0.0:
        raise DegenerateSampleError("sum of values is zero: the Gini is undefined")
    pairs = n - 1 if Normalization(normalization) is Normalization.PAIR_UNBIASED else n
    return 2.0 * pairs * total


def _result(value: float, method: GiniMethod, n: int, normalization: Normalization) -> GiniResult:
    return GiniResult(value=value, method=method, n=n, normalization=Normalization(normalization))


def mean_absolute_difference_sum(values: np.ndarray, block: Optional[int] = None) -> float:
    """sum_i sum_j |Y_i - Y_j| by explicit pairs, in fixed row blocks.

    Each block is summed with math.fsum and the block partials are combined in
    order, so the result does not depend on how blocks are scheduled.
    """
    block = settings.pairwise_block if block is None else block
    partials = []
    for start in range(0, values.size, block):
        rows = values[start:start + block]
        partials.append(math.fsum(np.abs(rows[:, None] - values[None, :]).ravel()))
    return math.fsum(partials)


def gini_pairwise(sample: SampleLike, normalization: Normalization = Normalization.PAIR_UNBIASED) -> GiniResult:
    """O(n^2) pairwise estimator"""
    values = _values(sample)
    n = int(values.size)
    denominator = _denominator(n, math.fsum(values), normalization)
    return _result(mean_absolute_difference_sum(values) / denominator, GiniMethod.DIRECT_PAIRWISE, n, normalization)


def gini_ordered(sample: SampleLike, normalization: Normalization = Normalization.PAIR_UNBIASED) -> GiniResult:
    """O(n log n) order-statistic estimator, equal to gini_pairwise"""
    values = _values(sample)
    n = int(values.size)
    ordered = np.sort(values, kind="stable")
    weights = 2.0 * np.arange(1, n + 1, dtype=np.float64) - n - 1.0
    pair_sum = 2.0 * math.fsum(weights * ordered)
    denominator = _denominator(n, math.fsum(ordered), normalization)
    return _result(pair_sum / denominator, GiniMethod.DIRECT_ORDERED, n, normalization)


def direct_gini(
    sample: SampleLike,
    normalization: Normalization = Normalization.PAIR_UNBIASED,
    method: GiniMethod = GiniMethod.DIRECT_ORDERED,
) -> GiniResult:
    method = GiniMethod(method)
    if method is GiniMethod.DIRECT_PAIRWISE:
        return gini_pairwise(sample, normalization)
    if method is GiniMethod.DIRECT_ORDERED:
        return gini_ordered(sample, normalization)
    raise DomainError(f"{method.value} is not a direct method")


def gini_of_union(
    samples: Sequence[SampleLike],
    normalization: Normalization = Normalization.PAIR_UNBIASED,
) -> UnionGiniResult:
    """Gini of the pooled samples and the size-weighted average of the parts"""
    if len(samples) < 2:
        raise InsufficientDataError(f"a union needs at least 2 samples, got {len(samples)}")

    parts = [gini_ordered(s, normalization) for s in samples]
    pooled_values = np.concatenate([_values(s) for s in samples])
    pooled = gini_ordered(pooled_values, normalization)

    total = sum(part.n for part in parts)
    weighted = math.fsum(part.n * part.value for part in parts) / total
    return UnionGiniResult(pooled=pooled, parts=parts, weighted_average=weighted)
