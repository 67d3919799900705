"""
Fat-Tail Gini Toolkit: base.py
Description: Command definitions, results and the abstract command base class
Version: 1.0.0
"""

# core/base.py
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List, Optional
import logging

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import GiniToolkitError, InputError

logger = logging.getLogger(__name__)


class ToolResultType(str, Enum):
    """Types of tool results"""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"
    ERROR = "error"


class ToolResult(BaseModel):
    """Standardized tool result format"""
    model_config = ConfigDict(use_enum_values=True)

    success: bool
    result_type: ToolResultType
    content: Any = None
    # Single number printed by --plain
    plain: Optional[str] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)
    error_message: Optional[str] = None
    exit_code: int = 0


class ToolParameter(BaseModel):
    """Tool parameter definition"""
    name: str
    param_type: str  # "string", "number", "integer", "boolean", "array"
    description: str
    required: bool = True
    default: Any = None
    enum_values: Optional[List[Any]] = None
    # Element type for "array" parameters
    item_type: str = "number"


class ToolDefinition(BaseModel):
    """Tool metadata and schema.

    Dotted names ("experiment.table") become nested subcommands on the CLI.
    """
    name: str
    description: str
    parameters: List[ToolParameter]
    category: str = "general"


class BaseTool(ABC):
    """Abstract base class for all commands"""

    def __init__(self, config: Dict[str, Any] = None):
        self.config = config or {}
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    @property
    @abstractmethod
    def definition(self) -> ToolDefinition:
        """Return tool definition for registration"""
        pass

    @abstractmethod
    async def execute(self, **kwargs) -> ToolResult:
        """Execute the tool with given parameters"""
        pass

    def validate_parameters(self, params: Dict[str, Any]) -> Dict[str, Any]:
        """Validate and clean parameters against tool definition"""
        validated = {}
        known = {p.name for p in self.definition.parameters}
        unknown = sorted(set(params) - known)
        if unknown:
            raise InputError(f"Unknown parameter(s) for {self.definition.name}: {', '.join(unknown)}")

        for param_def in self.definition.parameters:
            value = params.get(param_def.name)

            if value is None:
                if param_def.default is not None:
                    value = param_def.default
                elif param_def.required:
                    raise InputError(f"Missing required parameter: {param_def.name}")

            if value is not None and param_def.enum_values and value not in param_def.enum_values:
                choices = ", ".join(str(v) for v in param_def.enum_values)
                raise InputError(f"Invalid value for {param_def.name}: {value!r} (choose from {choices})")

            validated[param_def.name] = value

        return validated

    def failure(self, error: Exception) -> ToolResult:
        """Convert an exception into a failed result with the matching exit code"""
        if isinstance(error, GiniToolkitError):
            exit_code = error.exit_code
        elif isinstance(error, ValidationError):
            # Parameter values rejected by a pydantic model
            exit_code = InputError.exit_code
        else:
            exit_code = 1
        if exit_code == 1:
            self.logger.exception(f"{self.definition.name} failed unexpectedly")
        else:
            self.logger.error(f"{self.definition.name} failed: {error}")
        return ToolResult(
            success=False,
            result_type=ToolResultType.ERROR,
            content=str(error),
            error_message=str(error),
            exit_code=exit_code,
            metadata={"tool": self.definition.name, "error_type": type(error).__name__},
        )
