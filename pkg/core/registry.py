"""
Fat-Tail Gini Toolkit: registry.py
Description: Central registry of command-line tools
Version: 1.0.0
"""

# core/registry.py
from typing import Dict, List, Type
import logging

from .base import BaseTool, ToolDefinition
from .errors import InputError

logger = logging.getLogger(__name__)


class ToolRegistry:
    """Central registry for all available tools"""

    def __init__(self):
        self._tools: Dict[str, Type[BaseTool]] = {}
        self._definitions: Dict[str, ToolDefinition] = {}
        self._instances: Dict[str, BaseTool] = {}

    def register(self, tool_class: Type[BaseTool]) -> Type[BaseTool]:
        """Register a tool class"""
        definition = tool_class().definition
        if definition.name in self._tools and self._tools[definition.name] is not tool_class:
            raise ValueError(f"Duplicate tool name: {definition.name}")

        self._tools[definition.name] = tool_class
        self._definitions[definition.name] = definition
        logger.debug(f"Registered tool: {definition.name}")
        return tool_class

    def get_tool(self, tool_name: str) -> BaseTool:
        """Get tool instance (cached)"""
        if tool_name not in self._instances:
            if tool_name not in self._tools:
                raise InputError(f"Tool not found: {tool_name}")
            self._instances[tool_name] = self._tools[tool_name]()

        return self._instances[tool_name]

    def list_tools(self) -> List[ToolDefinition]:
        """List all registered tools, sorted by name"""
        return [self._definitions[name] for name in sorted(self._definitions)]

    def get_tool_definition(self, tool_name: str) -> ToolDefinition:
        """Get definition for specific tool"""
        if tool_name not in self._definitions:
            raise InputError(f"Tool not found: {tool_name}")
        return self._definitions[tool_name]


# Global registry instance
registry = ToolRegistry()
