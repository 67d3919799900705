"""
Fat-Tail Gini Toolkit: gini_tools.py
Description: Gini estimation commands
Version: 1.0.0
"""

# tools/gini_tools.py
"""
Gini of a data file (direct or via the ML tail exponent), and the analytic
Gini of a parametric family
"""

from typing import Any, Dict, Optional

from pydantic import ValidationError

from config.settings import settings
from core.base import BaseTool, ToolDefinition, ToolParameter, ToolResult, ToolResultType
from core.errors import GiniToolkitError
from core.registry import registry
from gini.direct_estimation import GiniMethod, Normalization, direct_gini
from gini.distributions import Family, make_spec, quadrature_gini
from gini.tail_ml import analytic_gini_result, derived_gini, fit_tail
from .dataset_io import load_dataset

FAMILIES = [f.value for f in Family]
NORMALIZATIONS = [n.value for n in Normalization]


class GiniTool(BaseTool):
    """Estimate the Gini coefficient of a data file"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="gini",
            description="Gini coefficient of a data file, directly or from the ML tail exponent",
            category="estimation",
            parameters=[
                ToolParameter(
                    name="input",
                    description="Data file: one value per line, or CSV with --csv/--column",
                    param_type="string",
                    required=True
                ),
                ToolParameter(
                    name="method",
                    description="direct (pairwise differences) or tail (ML exponent)",
                    param_type="string",
                    required=False,
                    default="direct",
                    enum_values=["direct", "tail"]
                ),
                ToolParameter(
                    name="estimator",
                    description="Direct estimator: ordered (O(n log n)) or pairwise (O(n^2))",
                    param_type="string",
                    required=False,
                    default="ordered",
                    enum_values=["ordered", "pairwise"]
                ),
                ToolParameter(
                    name="normalization",
                    description="Direct estimator denominator: 2(n-1)sum (pair-unbiased) or 2n sum (plugin)",
                    param_type="string",
                    required=False,
                    default=Normalization.PAIR_UNBIASED.value,
                    enum_values=NORMALIZATIONS
                ),
                ToolParameter(
                    name="family",
                    description="Tail family for the ML route",
                    param_type="string",
                    required=False,
                    default=Family.PARETO_I.value,
                    enum_values=FAMILIES
                ),
                ToolParameter(
                    name="scale_L",
                    description="Known scale (L for Pareto I, lambda for Lomax); default: sample minimum",
                    param_type="number",
                    required=False
                ),
                ToolParameter(
                    name="epsilon",
                    description="Truncation margin: the ML estimate must exceed 1 + epsilon",
                    param_type="number",
                    required=False
                ),
                ToolParameter(
                    name="csv",
                    description="Parse the input as CSV",
                    param_type="boolean",
                    required=False,
                    default=False
                ),
                ToolParameter(
                    name="column",
                    description="CSV column name or zero-based index",
                    param_type="string",
                    required=False
                ),
            ]
        )

    async def execute(self, input: str, method: str = "direct", estimator: str = "ordered",
                      normalization: str = Normalization.PAIR_UNBIASED.value,
                      family: str = Family.PARETO_I.value, scale_L: Optional[float] = None,
                      epsilon: Optional[float] = None, csv: bool = False,
                      column: Optional[str] = None) -> ToolResult:
        """Execute Gini estimation"""
        try:
            dataset = load_dataset(input, column=column, csv=csv)

            if method == "direct":
                direct_method = GiniMethod.DIRECT_PAIRWISE if estimator == "pairwise" else GiniMethod.DIRECT_ORDERED
                result = direct_gini(dataset.sample, Normalization(normalization), direct_method)
            else:
                epsilon = settings.default_epsilon if epsilon is None else epsilon
                if scale_L is None and family == Family.PARETO_I.value:
                    self.logger.warning(
                        "scale L not given: using the sample minimum, which is excluded from the likelihood"
                    )
                estimate = fit_tail(dataset.sample, family, scale_L, epsilon)
                result = derived_gini(estimate, family)

            content = result.model_dump(mode="json")
            content["source"] = dataset.sample.source
            return ToolResult(
                success=True,
                result_type=ToolResultType.JSON,
                content=content,
                plain=repr(result.value),
                metadata={"tool": "gini", "method": result.method, "n": result.n}
            )

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


class AnalyticGiniTool(BaseTool):
    """Closed-form Gini of a parametric family, cross-checked by quadrature"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="analytic",
            description="Analytic Gini of a Pareto I or Lomax distribution (closed form and quadrature)",
            category="estimation",
            parameters=[
                ToolParameter(
                    name="alpha",
                    description="Tail exponent (> 1)",
                    param_type="number",
                    required=True
                ),
                ToolParameter(
                    name="family",
                    description="Distribution family",
                    param_type="string",
                    required=False,
                    default=Family.PARETO_I.value,
                    enum_values=FAMILIES
                ),
                ToolParameter(
                    name="scale",
                    description="L (Pareto I) or lambda (Lomax)",
                    param_type="number",
                    required=False,
                    default=1.0
                ),
            ]
        )

    async def execute(self, alpha: float, family: str = Family.PARETO_I.value, scale: float = 1.0) -> ToolResult:
        try:
            spec = make_spec(family, alpha, scale)
            result = analytic_gini_result(spec)
            content = result.model_dump(mode="json")
            content["quadrature"] = quadrature_gini(spec)
            return ToolResult(
                success=True,
                result_type=ToolResultType.JSON,
                content=content,
                plain=repr(result.value),
                metadata={"tool": "analytic", "family": family}
            )
        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


registry.register(GiniTool)
registry.register(AnalyticGiniTool)
