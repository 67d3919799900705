"""
Fat-Tail Gini Toolkit: simulate_tools.py
Description: Reproducible sample files from the Pareto I and Lomax families
Version: 1.0.0
"""

# tools/simulate_tools.py
from typing import Any, Dict, Optional

from pydantic import ValidationError

from config.settings import settings
from core.base import BaseTool, ToolDefinition, ToolParameter, ToolResult, ToolResultType
from core.errors import GiniToolkitError
from core.registry import registry
from gini.distributions import Family, make_spec, sample
from gini.experiments import derive_stream
from .dataset_io import format_values, write_text


class SimulateTool(BaseTool):
    """Draw n values and write them one per line"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="simulate",
            description="Write n simulated values, one per line; deterministic under --seed",
            category="simulation",
            parameters=[
                ToolParameter(
                    name="family",
                    description="Distribution family",
                    param_type="string",
                    required=False,
                    default=Family.PARETO_I.value,
                    enum_values=[f.value for f in Family]
                ),
                ToolParameter(
                    name="alpha",
                    description="Tail exponent",
                    param_type="number",
                    required=True
                ),
                ToolParameter(
                    name="scale",
                    description="L (Pareto I) or lambda (Lomax)",
                    param_type="number",
                    required=False,
                    default=1.0
                ),
                ToolParameter(
                    name="n",
                    description="Number of values",
                    param_type="integer",
                    required=True
                ),
                ToolParameter(
                    name="seed",
                    description="Master seed (a default is used and logged when omitted)",
                    param_type="integer",
                    required=False
                ),
                ToolParameter(
                    name="out",
                    description="Output file (default: stdout)",
                    param_type="string",
                    required=False
                ),
            ]
        )

    async def execute(self, alpha: float, n: int, family: str = Family.PARETO_I.value, scale: float = 1.0,
                      seed: Optional[int] = None, out: Optional[str] = None) -> ToolResult:
        try:
            if seed is None:
                seed = settings.default_seed
                self.logger.warning(f"no seed given, using {seed}")

            spec = make_spec(family, alpha, scale)
            data = sample(spec, n, derive_stream(seed))
            text = format_values(data.values)

            metadata = {"tool": "simulate", "family": family, "n": n, "seed": seed}
            if out:
                target = write_text(out, text)
                self.logger.info(f"Wrote {n} values to {target}")
                return ToolResult(
                    success=True,
                    result_type=ToolResultType.TEXT,
                    content="",
                    metadata={**metadata, "out": str(target)}
                )
            return ToolResult(success=True, result_type=ToolResultType.TEXT, content=text, metadata=metadata)

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


registry.register(SimulateTool)
