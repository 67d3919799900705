# tools/__init__.py - Auto-import and register all commands

# Import all tools to trigger registration
from .gini_tools import GiniTool, AnalyticGiniTool
from .simulate_tools import SimulateTool
from .density_tools import DensityTool, MomentTool
from .experiment_tools import (
    TableExperimentTool,
    AggregationExperimentTool,
    ConvergenceExperimentTool,
    StdDeclineExperimentTool,
)

# Note: Tools register themselves when imported via registry.register() calls in each module

__all__ = [
    "GiniTool",
    "AnalyticGiniTool",
    "SimulateTool",
    "DensityTool",
    "MomentTool",
    "TableExperimentTool",
    "AggregationExperimentTool",
    "ConvergenceExperimentTool",
    "StdDeclineExperimentTool",
]
