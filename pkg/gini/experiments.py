"""
Fat-Tail Gini Toolkit: experiments.py
Description: Deterministic Monte Carlo studies comparing direct and ML-derived Gini estimates
Version: 1.0.0

Every replication draws from its own Philox stream, keyed by
SeedSequence(master_seed, spawn_key=(tag, ...)). Replications run in any
order on any number of threads; results land in index order and are reduced
single-threaded, so reports are identical for every thread count.
"""

# gini/experiments.py
import csv
import io
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import stats

from config.settings import settings
from core.errors import DomainError, InsufficientDataError, UndefinedMeanError
from .direct_estimation import Normalization, gini_of_union, gini_ordered
from .distributions import Family, Sample, analytic_gini, make_spec, sample
from .tail_ml import DerivedGiniDistribution, derived_gini, fit_tail, gini_moment, moment_partial_sums

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Stream tags keep the key spaces of different studies apart
TABLE_STREAM = 1
AGGREGATION_STREAM = 2

TABLE_CSV_HEADER = "n,direct_mean,direct_bias,direct_std,ml_mean,ml_std,ml_rejections,error_ratio"
AGGREGATION_CSV_HEADER = (
    "units,unit_size,replications,per_unit_mean_gini,weighted_avg,pooled_gini,"
    "superadditivity_gap,gap_std_error,p_value"
)
HISTOGRAM_CSV_HEADER = "bin_left,bin_right,count,density"
CONVERGENCE_CSV_HEADER = "U,partial_sum,abs_diff_to_last"
STD_DECLINE_CSV_HEADER = "n,analytic_mean,analytic_std,mc_mean,mc_std,accepted,rejected"


def default_replications(n: int) -> int:
    """Desk-scale replication counts"""
    if n <= 1_000:
        return 5000
    if n <= 10_000:
        return 2000
    if n <= 100_000:
        return 500
    return 100


def derive_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one replication, keyed by integers"""
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def _ordered_map(fn: Callable[[int], T], count: int, threads: Optional[int]) -> List[T]:
    threads = settings.threads if threads is None else int(threads)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    if threads == 1:
        return [fn(index) for index in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _mean(values: Sequence[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if len(values) else None


def _std(values: Sequence[float]) -> Optional[float]:
    if len(values) < 2:
        return None
    return float(np.std(np.asarray(values, dtype=np.float64), ddof=1))


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_table(header: str, rows: List[List[Any]]) -> str:
    """Fixed header, round-trippable floats, empty cells for missing values"""
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(header.split(","))
    for row in rows:
        writer.writerow([_csv_cell(cell) for cell in row])
    return output.getvalue()


class ExperimentConfig(BaseModel):
    """Frame of a Monte Carlo study"""
    model_config = ConfigDict(frozen=True)

    family: Family = Family.PARETO_I
    alpha: float = Field(1.1, gt=0, allow_inf_nan=False)
    scale: float = Field(1.0, gt=0, allow_inf_nan=False)
    sizes: List[int] = Field(default_factory=lambda: [1000], min_length=1)
    replications: Optional[int] = Field(None, ge=1)
    epsilon: float = Field(default_factory=lambda: settings.default_epsilon, gt=0)
    master_seed: int = Field(default_factory=lambda: settings.default_seed, ge=0, lt=2 ** 64)
    normalization: Normalization = Normalization.PAIR_UNBIASED
    keep_raw: bool = False

    @field_validator("sizes")
    @classmethod
    def _check_sizes(cls, sizes: List[int]) -> List[int]:
        if any(n < 2 for n in sizes):
            raise ValueError("every sample size must be >= 2")
        return sizes

    def replications_for(self, n: int) -> int:
        return self.replications or default_replications(n)


class ReplicationRecord(BaseModel):
    n: int
    replication: int
    direct: float
    alpha_hat: float
    alpha_debiased: float
    accepted: bool
    ml: Optional[float] = None


class TableRow(BaseModel):
    n: int
    replications: int
    direct_mean: float
    direct_bias: float
    direct_std: Optional[float]
    ml_mean: Optional[float]
    ml_std: Optional[float]
    ml_rejection_count: int
    error_ratio: Optional[float]
    ml_analytic_mean: Optional[float] = None
    ml_analytic_std: Optional[float] = None

    def csv_cells(self) -> List[Any]:
        return [
            self.n, self.direct_mean, self.direct_bias, self.direct_std,
            self.ml_mean, self.ml_std, self.ml_rejection_count, self.error_ratio,
        ]


class ExperimentReport(BaseModel):
    """Direct vs ML-derived Gini, one row per sample size"""
    experiment: str = "table"
    config: ExperimentConfig
    analytic_target: float
    rows: List[TableRow]
    raw: Optional[List[ReplicationRecord]] = None
    wall_time_seconds: Optional[float] = None

    def to_json(self, include_timing: bool = False) -> str:
        exclude = None if include_timing else {"wall_time_seconds"}
        return self.model_dump_json(indent=2, exclude=exclude) + "\n"

    def to_csv(self) -> str:
        return csv_table(TABLE_CSV_HEADER, [row.csv_cells() for row in self.rows])


def run_single_replication(config: ExperimentConfig, n: int, replication: int) -> ReplicationRecord:
    """One draw, one direct Gini, one ML fit"""
    spec = make_spec(config.family, config.alpha, config.scale)
    rng = derive_stream(config.master_seed, TABLE_STREAM, n, replication)
    data = sample(spec, n, rng)
    direct = gini_ordered(data, config.normalization).value
    estimate = fit_tail(data, config.family, config.scale, config.epsilon)
    ml = derived_gini(estimate, config.family).value if estimate.accepted else None
    return ReplicationRecord(
        n=n,
        replication=replication,
        direct=direct,
        alpha_hat=estimate.alpha_hat,
        alpha_debiased=estimate.alpha_debiased,
        accepted=estimate.accepted,
        ml=ml,
    )


def _analytic_ml_moments(config: ExperimentConfig, n: int):
    if config.alpha <= 1.0:
        return None, None
    dist = DerivedGiniDistribution(alpha=config.alpha, n=n, epsilon=config.epsilon)
    mean = gini_moment(1, dist).value
    second = gini_moment(2, dist).value
    std = math.sqrt(max(second - mean * mean, 0.0))
    if Family(config.family) is Family.LOMAX:
        # a/(2a-1) = (1 + 1/(2a-1)) / 2
        return (1.0 + mean) / 2.0, std / 2.0
    return mean, std


def _summarize(config: ExperimentConfig, n: int, records: List[ReplicationRecord], target: float) -> TableRow:
    direct = [record.direct for record in records]
    ml = [record.ml for record in records if record.accepted]
    rejected = len(records) - len(ml)
    if rejected:
        logger.warning(f"n={n}: {rejected} of {len(records)} ML replications rejected (alpha' <= 1 + eps)")

    direct_mean = _mean(direct)
    direct_std = _std(direct)
    ml_std = _std(ml)
    ratio = direct_std / ml_std if direct_std is not None and ml_std else None
    analytic_mean, analytic_std = _analytic_ml_moments(config, n)
    return TableRow(
        n=n,
        replications=len(records),
        direct_mean=direct_mean,
        direct_bias=direct_mean - target,
        direct_std=direct_std,
        ml_mean=_mean(ml),
        ml_std=ml_std,
        ml_rejection_count=rejected,
        error_ratio=ratio,
        ml_analytic_mean=analytic_mean,
        ml_analytic_std=analytic_std,
    )


def run_table_experiment(config: ExperimentConfig, threads: Optional[int] = None) -> ExperimentReport:
    """Direct vs ML-derived Gini over replications, for every configured n"""
    spec = make_spec(config.family, config.alpha, config.scale)
    if spec.alpha <= 1.0:
        raise UndefinedMeanError(f"alpha={spec.alpha!r} <= 1 has no Gini to compare against")
    target = analytic_gini(spec)

    started = time.perf_counter()
    rows = []
    raw: List[ReplicationRecord] = []
    for n in config.sizes:
        replications = config.replications_for(n)
        logger.info(f"table experiment: n={n} replications={replications}")
        records = _ordered_map(lambda r: run_single_replication(config, n, r), replications, threads)
        rows.append(_summarize(config, n, records, target))
        if config.keep_raw:
            raw.extend(records)

    elapsed = time.perf_counter() - started
    logger.info(f"table experiment finished in {elapsed:.2f}s")
    return ExperimentReport(
        config=config,
        analytic_target=target,
        rows=rows,
        raw=raw if config.keep_raw else None,
        wall_time_seconds=elapsed,
    )


class AggregationRecord(BaseModel):
    replication: int
    per_unit_mean: float
    weighted_average: float
    pooled: float
    gap: float


class AggregationReport(BaseModel):
    """Pooled vs per-unit direct Gini"""
    experiment: str = "aggregate"
    config: ExperimentConfig
    units: int
    unit_size: int
    replications: int
    analytic_target: Optional[float]
    per_unit_mean_gini: float
    weighted_avg: float
    pooled_gini: float
    superadditivity_gap: float
    gap_std_error: Optional[float]
    z_score: Optional[float]
    p_value: Optional[float]
    superadditive_at_99: bool
    raw: Optional[List[AggregationRecord]] = None
    wall_time_seconds: Optional[float] = None

    def to_json(self, include_timing: bool = False) -> str:
        exclude = None if include_timing else {"wall_time_seconds"}
        return self.model_dump_json(indent=2, exclude=exclude) + "\n"

    def to_csv(self) -> str:
        return csv_table(AGGREGATION_CSV_HEADER, [[
            self.units, self.unit_size, self.replications, self.per_unit_mean_gini, self.weighted_avg,
            self.pooled_gini, self.superadditivity_gap, self.gap_std_error, self.p_value,
        ]])


def aggregate_units(
    samples: Sequence[Sample],
    normalization: Normalization = Normalization.PAIR_UNBIASED,
    replication: int = 0,
) -> AggregationRecord:
    """Per-unit, weighted and pooled direct Gini for one set of units"""
    union = gini_of_union(samples, normalization)
    return AggregationRecord(
        replication=replication,
        per_unit_mean=_mean([part.value for part in union.parts]),
        weighted_average=union.weighted_average,
        pooled=union.pooled.value,
        gap=union.gap,
    )


def run_aggregation_experiment(
    units: int,
    unit_size: int,
    config: ExperimentConfig,
    threads: Optional[int] = None,
) -> AggregationReport:
    """Pool i.i.d. units and compare with their separate Ginis"""
    if units < 2:
        raise InsufficientDataError(f"aggregation needs at least 2 units, got {units}")
    if unit_size < 2:
        raise InsufficientDataError(f"each unit needs at least 2 values, got {unit_size}")

    spec = make_spec(config.family, config.alpha, config.scale)
    replications = config.replications or 1000
    logger.info(f"aggregation experiment: {units} units x {unit_size}, replications={replications}")

    def replicate(r: int) -> AggregationRecord:
        rng = derive_stream(config.master_seed, AGGREGATION_STREAM, units, unit_size, r)
        parts = [sample(spec, unit_size, rng) for _ in range(units)]
        return aggregate_units(parts, config.normalization, replication=r)

    started = time.perf_counter()
    records = _ordered_map(replicate, replications, threads)
    elapsed = time.perf_counter() - started

    gaps = [record.gap for record in records]
    gap_mean = _mean(gaps)
    gap_std = _std(gaps)
    std_error = gap_std / math.sqrt(len(gaps)) if gap_std is not None else None
    z_score = gap_mean / std_error if std_error else None
    p_value = float(stats.norm.sf(z_score)) if z_score is not None else None
    logger.info(f"aggregation experiment finished in {elapsed:.2f}s: mean gap {gap_mean!r}, p={p_value!r}")

    target = analytic_gini(spec) if spec.alpha > 1.0 else None
    return AggregationReport(
        config=config,
        units=units,
        unit_size=unit_size,
        replications=replications,
        analytic_target=target,
        per_unit_mean_gini=_mean([record.per_unit_mean for record in records]),
        weighted_avg=_mean([record.weighted_average for record in records]),
        pooled_gini=_mean([record.pooled for record in records]),
        superadditivity_gap=gap_mean,
        gap_std_error=std_error,
        z_score=z_score,
        p_value=p_value,
        superadditive_at_99=p_value is not None and p_value < 0.01,
        raw=records if config.keep_raw else None,
        wall_time_seconds=elapsed,
    )


class HistogramBin(BaseModel):
    bin_left: float
    bin_right: float
    count: int
    density: float


class Histogram(BaseModel):
    bins: List[HistogramBin]
    total: int

    def to_csv(self) -> str:
        return csv_table(HISTOGRAM_CSV_HEADER, [[b.bin_left, b.bin_right, b.count, b.density] for b in self.bins])


def emit_histogram(estimates: Sequence[float], bins: int) -> Histogram:
    """Equal-width histogram over [min, max] with a normalized density column.

    A constant input gets a unit-wide range centred on its value.
    """
    values = np.asarray(estimates, dtype=np.float64).ravel()
    if values.size == 0:
        raise InsufficientDataError("cannot build a histogram from no estimates")
    if int(bins) != bins or bins < 2:
        raise DomainError(f"bins must be an integer >= 2, got {bins!r}")
    bins = int(bins)

    low, high = float(values.min()), float(values.max())
    if low == high:
        low, high = low - 0.5, high + 0.5
    counts, edges = np.histogram(values, bins=bins, range=(low, high))
    width = (high - low) / bins
    density = counts / (values.size * width)
    return Histogram(
        bins=[
            HistogramBin(bin_left=float(edges[i]), bin_right=float(edges[i + 1]), count=int(counts[i]), density=float(density[i]))
            for i in range(bins)
        ],
        total=int(values.size),
    )


def report_histograms(report: ExperimentReport, n: int, bins: int) -> Dict[str, Histogram]:
    """Histograms of the direct and ML-derived estimates at one sample size"""
    if report.raw is None:
        raise DomainError("the report carries no raw replication records (run with keep_raw)")
    records = [record for record in report.raw if record.n == n]
    if not records:
        raise DomainError(f"no raw records for n={n}")
    histograms = {"direct": emit_histogram([record.direct for record in records], bins)}
    accepted = [record.ml for record in records if record.accepted]
    if accepted:
        histograms["ml"] = emit_histogram(accepted, bins)
    return histograms


class ConvergenceRow(BaseModel):
    U: int
    partial_sum: float
    abs_diff_to_last: float


class ConvergenceTable(BaseModel):
    distribution: DerivedGiniDistribution
    rows: List[ConvergenceRow]

    def to_csv(self) -> str:
        return csv_table(CONVERGENCE_CSV_HEADER, [[r.U, r.partial_sum, r.abs_diff_to_last] for r in self.rows])


def run_convergence_study(dist: DerivedGiniDistribution, max_U: int) -> ConvergenceTable:
    """Partial sums of the first-moment series for U = 1 .. max_U"""
    sums = moment_partial_sums(1, dist, max_U)
    last = sums[-1]
    return ConvergenceTable(
        distribution=dist,
        rows=[ConvergenceRow(U=u, partial_sum=s, abs_diff_to_last=abs(s - last)) for u, s in enumerate(sums, start=1)],
    )


class StdDeclineRow(BaseModel):
    n: int
    analytic_mean: float
    analytic_std: float
    mc_mean: Optional[float]
    mc_std: Optional[float]
    accepted: int
    rejected: int


class StdDeclineTable(BaseModel):
    alpha: float
    epsilon: float
    master_seed: int
    rows: List[StdDeclineRow]

    def to_csv(self) -> str:
        return csv_table(STD_DECLINE_CSV_HEADER, [
            [r.n, r.analytic_mean, r.analytic_std, r.mc_mean, r.mc_std, r.accepted, r.rejected] for r in self.rows
        ])


def run_std_decline_study(
    alpha: float,
    epsilon: float,
    sizes: Sequence[int],
    replications: Optional[int] = None,
    master_seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> StdDeclineTable:
    """Analytic and Monte Carlo standard deviation of the ML-derived Gini against n"""
    if not sizes:
        raise InsufficientDataError("std-decline study needs at least one sample size")
    if alpha <= 1.0:
        raise UndefinedMeanError(f"alpha={alpha!r} <= 1 has no Gini")
    master_seed = settings.default_seed if master_seed is None else master_seed
    spec = make_spec(Family.PARETO_I, alpha, 1.0)

    rows = []
    for n in sizes:
        dist = DerivedGiniDistribution(alpha=alpha, n=n, epsilon=epsilon)
        mean = gini_moment(1, dist).value
        second = gini_moment(2, dist).value
        reps = replications or default_replications(n)
        logger.info(f"std-decline study: n={n} replications={reps}")

        def replicate(r: int) -> Optional[float]:
            # Same streams as the table experiment at scale L = 1
            rng = derive_stream(master_seed, TABLE_STREAM, n, r)
            estimate = fit_tail(sample(spec, n, rng), Family.PARETO_I, 1.0, epsilon)
            return derived_gini(estimate).value if estimate.accepted else None

        values = [v for v in _ordered_map(replicate, reps, threads) if v is not None]
        rows.append(StdDeclineRow(
            n=n,
            analytic_mean=mean,
            analytic_std=math.sqrt(max(second - mean * mean, 0.0)),
            mc_mean=_mean(values),
            mc_std=_std(values),
            accepted=len(values),
            rejected=reps - len(values),
        ))
    return StdDeclineTable(alpha=alpha, epsilon=epsilon, master_seed=master_seed, rows=rows)
