"""
Fat-Tail Gini Toolkit: density_tools.py
Description: Density grids and moments of the ML exponent and the derived Gini
Version: 1.0.0
"""

# tools/density_tools.py
import math
import warnings
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from config.settings import settings
from core.base import BaseTool, ToolDefinition, ToolParameter, ToolResult, ToolResultType
from core.errors import DomainError, GiniToolkitError, SeriesConvergenceError, SeriesConvergenceWarning
from core.registry import registry
from gini.experiments import csv_table
from gini.tail_ml import (
    DerivedGiniDistribution,
    gini_moment,
    pdf_alpha_hat,
    pdf_alpha_truncated,
    pdf_derived_gini,
)
from .dataset_io import write_text

PDF_CSV_HEADER = "point,density"
DENSITIES = ["alpha-hat", "alpha-truncated", "derived-gini"]


def _support(which: str, alpha: float, epsilon: float) -> Tuple[float, float, str]:
    """Closed evaluation range, plus its printable form"""
    if which == "alpha-hat":
        return 0.0, math.inf, "(0, inf)"
    if which == "alpha-truncated":
        cutoff = 1.0 + epsilon
        return cutoff, math.inf, f"[{cutoff!r}, inf)"
    g_max = 1.0 / (2.0 * epsilon + 1.0)
    return 0.0, g_max, f"(0, {g_max!r})"


def _default_range(which: str, alpha: float, epsilon: float) -> Tuple[float, float]:
    if which == "derived-gini":
        return 0.0, 1.0 / (2.0 * epsilon + 1.0)
    low = 1.0 + epsilon if which == "alpha-truncated" else alpha / 4.0
    return low, max(4.0 * alpha, low + 1.0)


def density_grid(which: str, alpha: float, n: int, epsilon: float,
                 start: Optional[float] = None, stop: Optional[float] = None,
                 points: int = 1001) -> np.ndarray:
    """(point, density) rows over an evenly spaced grid"""
    if which not in DENSITIES:
        raise DomainError(f"unknown density {which!r} (choose from {', '.join(DENSITIES)})")
    if points < 2:
        raise DomainError(f"a grid needs at least 2 points, got {points}")

    default_start, default_stop = _default_range(which, alpha, epsilon)
    start = default_start if start is None else float(start)
    stop = default_stop if stop is None else float(stop)
    if not (math.isfinite(start) and math.isfinite(stop)) or stop <= start:
        raise DomainError(f"grid must satisfy start < stop, got [{start!r}, {stop!r}]")

    low, high, printable = _support(which, alpha, epsilon)
    # alpha-hat is open at 0
    below = start <= low if which == "alpha-hat" else start < low
    if below or stop > high:
        raise DomainError(f"grid [{start!r}, {stop!r}] outside the support {printable} of the {which} density")

    grid = np.linspace(start, stop, int(points))
    if which == "alpha-hat":
        density = pdf_alpha_hat(grid, alpha, n)
    elif which == "alpha-truncated":
        density = pdf_alpha_truncated(grid, alpha, n, epsilon)
    else:
        density = pdf_derived_gini(grid, DerivedGiniDistribution(alpha=alpha, n=n, epsilon=epsilon))
    return np.column_stack([grid, np.asarray(density, dtype=np.float64)])


class DensityTool(BaseTool):
    """Evaluate one of the sampling densities on a grid"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="pdf",
            description="CSV of (point, density) for the ML exponent or the derived Gini",
            category="distributions",
            parameters=[
                ToolParameter(
                    name="which",
                    description="Density to evaluate",
                    param_type="string",
                    required=True,
                    enum_values=DENSITIES
                ),
                ToolParameter(name="alpha", description="True tail exponent", param_type="number", required=True),
                ToolParameter(name="n", description="Sample size", param_type="integer", required=True),
                ToolParameter(
                    name="epsilon",
                    description="Truncation margin (truncated and derived-gini densities)",
                    param_type="number",
                    required=False
                ),
                ToolParameter(name="start", description="First grid point", param_type="number", required=False),
                ToolParameter(name="stop", description="Last grid point", param_type="number", required=False),
                ToolParameter(
                    name="points",
                    description="Number of grid points",
                    param_type="integer",
                    required=False,
                    default=1001
                ),
                ToolParameter(
                    name="out",
                    description="Output CSV (default: stdout)",
                    param_type="string",
                    required=False
                ),
            ]
        )

    async def execute(self, which: str, alpha: float, n: int, epsilon: Optional[float] = None,
                      start: Optional[float] = None, stop: Optional[float] = None,
                      points: int = 1001, out: Optional[str] = None) -> ToolResult:
        try:
            epsilon = settings.default_epsilon if epsilon is None else epsilon
            if epsilon <= 0:
                raise DomainError(f"epsilon must be > 0, got {epsilon!r}")
            rows = density_grid(which, alpha, n, epsilon, start, stop, points)
            text = csv_table(PDF_CSV_HEADER, [[float(x), float(y)] for x, y in rows])

            metadata = {"tool": "pdf", "which": which, "points": len(rows)}
            if out:
                target = write_text(out, text)
                self.logger.info(f"Wrote {len(rows)} grid points to {target}")
                return ToolResult(
                    success=True,
                    result_type=ToolResultType.CSV,
                    content="",
                    metadata={**metadata, "out": str(target)}
                )
            return ToolResult(success=True, result_type=ToolResultType.CSV, content=text, metadata=metadata)

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


class MomentTool(BaseTool):
    """Moments of the derived Gini from the binomial series"""

    def __init__(self, config: Dict[str, Any] = None):
        super().__init__(config)

    @property
    def definition(self) -> ToolDefinition:
        return ToolDefinition(
            name="moment",
            description="E[G^m] and standard deviation of the ML-derived Gini",
            category="distributions",
            parameters=[
                ToolParameter(name="alpha", description="True tail exponent (> 1)", param_type="number", required=True),
                ToolParameter(name="n", description="Sample size", param_type="integer", required=True),
                ToolParameter(name="epsilon", description="Truncation margin", param_type="number", required=False),
                ToolParameter(name="m", description="Moment order", param_type="integer", required=False, default=1),
                ToolParameter(
                    name="terms",
                    description="Maximum number of series terms",
                    param_type="integer",
                    required=False
                ),
            ]
        )

    async def execute(self, alpha: float, n: int, epsilon: Optional[float] = None, m: int = 1,
                      terms: Optional[int] = None) -> ToolResult:
        try:
            epsilon = settings.default_epsilon if epsilon is None else epsilon
            dist = DerivedGiniDistribution(alpha=alpha, n=n, epsilon=epsilon)
            with warnings.catch_warnings():
                # already logged by gini_moment; reported below as a failure
                warnings.simplefilter("ignore", SeriesConvergenceWarning)
                moment = gini_moment(m, dist, terms)
                first = moment if m == 1 else gini_moment(1, dist, terms)
                second = moment if m == 2 else gini_moment(2, dist, terms)

            if not (moment.converged and first.converged and second.converged):
                raise SeriesConvergenceError(
                    f"moment series not converged within {moment.terms_used} terms "
                    f"(partial sum {moment.value!r}, last term {moment.last_term!r})"
                )

            std = math.sqrt(max(second.value - first.value * first.value, 0.0))
            content = {
                "alpha": alpha,
                "n": n,
                "epsilon": epsilon,
                "m": m,
                "moment": moment.value,
                "std": std,
                "terms_used": moment.terms_used,
                "last_term": moment.last_term,
            }
            return ToolResult(
                success=True,
                result_type=ToolResultType.JSON,
                content=content,
                plain=repr(moment.value),
                metadata={"tool": "moment", "m": m}
            )

        except (GiniToolkitError, ValidationError) as e:
            return self.failure(e)


registry.register(DensityTool)
registry.register(MomentTool)
