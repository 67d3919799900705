"""
Fat-Tail Gini Toolkit: experiment_tools.py
Description: Monte Carlo studies (table, aggregate, convergence, std-decline)
Version: 1.0.0
"""

# tools/experiment_tools.py
"""
Experiment commands. Each writes a JSON (default) or CSV report to --out or
stdout; the configuration is echoed into the JSON for provenance.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from config.settings import settings
from core.base import BaseTool, ToolDefinition, ToolParameter, ToolResult, ToolResultType
from core.errors import DomainError, GiniToolkitError
from core.registry import registry
from gini.direct_estimation import Normalization
from gini.distributions import Family
from gini.experiments import (
    ExperimentConfig,
    report_histograms,
    run_aggregation_experiment,
    run_convergence_study,
    run_std_decline_study,
    run_table_experiment,
)
from gini.tail_ml import DerivedGiniDistribution
from .dataset_io import write_text

FORMATS = ["json", "csv"]


def _format_parameter() -> ToolParameter:
    return ToolParameter(
        name="format",
        description="Report format",
        param_type="string",
        required=False,
        default="json",
        enum_values=FORMATS
    )


def _out_parameter() -> ToolParameter:
    return ToolParameter(name="out", description="Report file (default: stdout)", param_type="string", required=False)


def _seed_parameter() -> ToolParameter:
    return ToolParameter(
        name="seed",
        description="Master seed (a default is used and logged when omitted)",
        param_type="integer",
        required=False
    )


def _threads_parameter() -> ToolParameter:
    # Filled from the global --threads flag
    return ToolParameter(name="threads", description="Worker threads", param_type="integer", required=False)


def histogram_path(out: str, kind: str, n: int) -> Path:
    """Sibling file of the report: report.json -> report.hist-direct-n1000.csv"""
    base = Path(out)
    return base.with_name(f"{base.stem}.hist-{kind}-n{n}.csv")


class ExperimentTool(BaseTool):
    """Shared report plumbing for the experiment commands"""

    def resolve_seed(self, seed: Optional[int]) -> int:
        if seed is None:
            seed = settings.default_seed
            self.logger.warning(f"no seed given, using {seed}")
        return seed

    def emit(self, report: Any, format: str, out: Optional[str], timing: bool = False,
             plain: Optional[str] = None, metadata: Dict[str, Any] = None) -> ToolResult:
        if format == "csv":
            text, result_type = report.to_csv(), ToolResultType.CSV
        elif hasattr(report, "to_json"):
            text, result_type = report.to_json(include_timing=timing), ToolResultType.JSON
        else:
            text, result_type = report.model_dump_json(indent=2) + "\n", ToolResultType.JSON

        metadata = {"tool": self.definition.name, **(metadata or {})}
        if out:
            target = write_text(out, text)
            self.logger.info(f"Report written to {target}")
            return ToolResult(
                success=True,
                result_type=result_type,
                content="",
                plain=plain,
                metadata={**metadata, "out": str(target)}
            )
        return ToolResult(success=True, result_type=result_type, content=text, plain=plain, metadata=metadata)


class TableExperimentTool(ExperimentTool):
    """Direct vs ML-derived Gini across sample sizes"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="experiment.table",
            description="Mean, bias and spread of the direct and ML-derived Gini per sample size",
            category="experiments",
            parameters=[
                ToolParameter(
                    name="family",
                    description="Distribution family",
                    param_type="string",
                    required=False,
                    default=Family.PARETO_I.value,
                    enum_values=[f.value for f in Family]
                ),
                ToolParameter(name="alpha", description="Tail exponent", param_type="number", required=False, default=1.1),
                ToolParameter(name="scale", description="L or lambda", param_type="number", required=False, default=1.0),
                ToolParameter(
                    name="sizes",
                    description="Sample sizes",
                    param_type="array",
                    item_type="integer",
                    required=False,
                    default=[1000]
                ),
                ToolParameter(
                    name="reps",
                    description="Replications per size (default depends on n)",
                    param_type="integer",
                    required=False
                ),
                ToolParameter(name="epsilon", description="Truncation margin", param_type="number", required=False),
                _seed_parameter(),
                ToolParameter(
                    name="normalization",
                    description="Direct estimator denominator",
                    param_type="string",
                    required=False,
                    default=Normalization.PAIR_UNBIASED.value,
                    enum_values=[m.value for m in Normalization]
                ),
                ToolParameter(
                    name="histogram_bins",
                    description="Also write histograms of both estimators at every size (needs --out)",
                    param_type="integer",
                    required=False
                ),
                ToolParameter(
                    name="raw",
                    description="Include every replication in the JSON report",
                    param_type="boolean",
                    required=False,
                    default=False
                ),
                ToolParameter(
                    name="timing",
                    description="Include wall time in the JSON report",
                    param_type="boolean",
                    required=False,
                    default=False
                ),
                _format_parameter(),
                _out_parameter(),
                _threads_parameter(),
            ]
        )

    async def execute(self, family: str = Family.PARETO_I.value, alpha: float = 1.1, scale: float = 1.0,
                      sizes: List[int] = None, reps: Optional[int] = None, epsilon: Optional[float] = None,
                      seed: Optional[int] = None, normalization: str = Normalization.PAIR_UNBIASED.value,
                      histogram_bins: Optional[int] = None, raw: bool = False, timing: bool = False,
                      format: str = "json", out: Optional[str] = None, threads: Optional[int] = None) -> ToolResult:
        try:
            if histogram_bins is not None and not out:
                raise DomainError("--histogram-bins writes files next to the report; give --out")

            config = ExperimentConfig(
                family=family,
                alpha=alpha,
                scale=scale,
                sizes=sizes or [1000],
                replications=reps,
                epsilon=settings.default_epsilon if epsilon is None else epsilon,
                master_seed=self.resolve_seed(seed),
                normalization=normalization,
                keep_raw=raw or histogram_bins is not None,
            )
            report = run_table_experiment(config, threads)

            written = []
            if histogram_bins is not None:
                for n in config.sizes:
                    for kind, histogram in report_histograms(report, n, histogram_bins).items():
                        written.append(str(write_text(histogram_path(out, kind, n), histogram.to_csv())))
                if not raw:
                    report = report.model_copy(update={"raw": None})

            return self.emit(report, format, out, timing, metadata={"histograms": written})

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


class AggregationExperimentTool(ExperimentTool):
    """Pooled vs per-unit Gini of i.i.d. units"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="experiment.aggregate",
            description="Superadditivity of the direct Gini under pooling of i.i.d. units",
            category="experiments",
            parameters=[
                ToolParameter(name="units", description="Number of units", param_type="integer", required=False, default=10),
                ToolParameter(
                    name="unit_size",
                    description="Values per unit",
                    param_type="integer",
                    required=False,
                    default=1000
                ),
                ToolParameter(
                    name="family",
                    description="Distribution family",
                    param_type="string",
                    required=False,
                    default=Family.PARETO_I.value,
                    enum_values=[f.value for f in Family]
                ),
                ToolParameter(name="alpha", description="Tail exponent", param_type="number", required=False, default=1.1),
                ToolParameter(name="scale", description="L or lambda", param_type="number", required=False, default=1.0),
                ToolParameter(name="reps", description="Replications (default 1000)", param_type="integer", required=False),
                _seed_parameter(),
                ToolParameter(
                    name="normalization",
                    description="Direct estimator denominator",
                    param_type="string",
                    required=False,
                    default=Normalization.PAIR_UNBIASED.value,
                    enum_values=[m.value for m in Normalization]
                ),
                ToolParameter(
                    name="timing",
                    description="Include wall time in the JSON report",
                    param_type="boolean",
                    required=False,
                    default=False
                ),
                _format_parameter(),
                _out_parameter(),
                _threads_parameter(),
            ]
        )

    async def execute(self, units: int = 10, unit_size: int = 1000, family: str = Family.PARETO_I.value,
                      alpha: float = 1.1, scale: float = 1.0, reps: Optional[int] = None,
                      seed: Optional[int] = None, normalization: str = Normalization.PAIR_UNBIASED.value,
                      timing: bool = False, format: str = "json", out: Optional[str] = None,
                      threads: Optional[int] = None) -> ToolResult:
        try:
            config = ExperimentConfig(
                family=family,
                alpha=alpha,
                scale=scale,
                sizes=[unit_size],
                replications=reps,
                master_seed=self.resolve_seed(seed),
                normalization=normalization,
            )
            report = run_aggregation_experiment(units, unit_size, config, threads)
            return self.emit(
                report, format, out, timing,
                plain=repr(report.superadditivity_gap),
                metadata={"superadditive_at_99": report.superadditive_at_99}
            )

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


class ConvergenceExperimentTool(ExperimentTool):
    """Partial sums of the first-moment series"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="experiment.convergence",
            description="Partial sums of the derived-Gini mean series against the number of terms",
            category="experiments",
            parameters=[
                ToolParameter(name="alpha", description="Tail exponent (> 1)", param_type="number", required=False, default=1.1),
                ToolParameter(name="n", description="Sample size", param_type="integer", required=False, default=10000),
                ToolParameter(name="epsilon", description="Truncation margin", param_type="number", required=False),
                ToolParameter(
                    name="max_terms",
                    description="Largest number of terms U",
                    param_type="integer",
                    required=False,
                    default=30
                ),
                _format_parameter(),
                _out_parameter(),
            ]
        )

    async def execute(self, alpha: float = 1.1, n: int = 10000, epsilon: Optional[float] = None,
                      max_terms: int = 30, format: str = "json", out: Optional[str] = None) -> ToolResult:
        try:
            dist = DerivedGiniDistribution(
                alpha=alpha, n=n, epsilon=settings.default_epsilon if epsilon is None else epsilon
            )
            table = run_convergence_study(dist, max_terms)
            return self.emit(table, format, out, plain=repr(table.rows[-1].partial_sum))

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


class StdDeclineExperimentTool(ExperimentTool):
    """Analytic and Monte Carlo spread of the derived Gini against n"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="experiment.std-decline",
            description="Standard deviation of the ML-derived Gini against n, analytic and simulated",
            category="experiments",
            parameters=[
                ToolParameter(name="alpha", description="Tail exponent (> 1)", param_type="number", required=False, default=1.1),
                ToolParameter(name="epsilon", description="Truncation margin", param_type="number", required=False),
                ToolParameter(
                    name="sizes",
                    description="Sample sizes",
                    param_type="array",
                    item_type="integer",
                    required=False,
                    default=[1000, 10000, 100000]
                ),
                ToolParameter(
                    name="reps",
                    description="Replications per size (default depends on n)",
                    param_type="integer",
                    required=False
                ),
                _seed_parameter(),
                _format_parameter(),
                _out_parameter(),
                _threads_parameter(),
            ]
        )

    async def execute(self, alpha: float = 1.1, epsilon: Optional[float] = None, sizes: List[int] = None,
                      reps: Optional[int] = None, seed: Optional[int] = None, format: str = "json",
                      out: Optional[str] = None, threads: Optional[int] = None) -> ToolResult:
        try:
            table = run_std_decline_study(
                alpha,
                settings.default_epsilon if epsilon is None else epsilon,
                sizes or [1000, 10000, 100000],
                replications=reps,
                master_seed=self.resolve_seed(seed),
                threads=threads,
            )
            return self.emit(table, format, out)

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


registry.register(TableExperimentTool)
registry.register(AggregationExperimentTool)
registry.register(ConvergenceExperimentTool)
registry.register(StdDeclineExperimentTool)
