"""
Fat-Tail Gini Toolkit: cli.py
Description: argparse front end generated from the tool registry
Version: 1.0.0
"""

# interfaces/cli.py
import argparse
import asyncio
import json
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from core.base import ToolDefinition, ToolParameter, ToolResult, ToolResultType
from core.errors import GiniToolkitError
from core.registry import registry

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

# Parameters filled from global flags rather than per-command options
GLOBAL_PARAMETERS = {"threads"}


def _option_name(param: ToolParameter) -> str:
    return "--" + param.name.replace("_", "-")


class GiniCLI:
    """Command-line driver: one subcommand per registered tool"""

    def __init__(self, stdout: TextIO = None, stderr: TextIO = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="gini_main.py",
            description="Direct and tail-exponent (ML) Gini estimation for fat-tailed data",
        )
        parser.add_argument("--plain", action="store_true", help="Print only the headline number")
        parser.add_argument("--threads", type=int, default=None, help="Worker threads for experiments")
        parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="Logging level")

        commands = parser.add_subparsers(dest="command", metavar="command")
        commands.required = True
        commands.add_parser("list", help="List every command with its parameters")

        groups: Dict[str, argparse._SubParsersAction] = {}
        for definition in registry.list_tools():
            if "." in definition.name:
                group, name = definition.name.split(".", 1)
                if group not in groups:
                    group_parser = commands.add_parser(group, help=f"{group} commands")
                    groups[group] = group_parser.add_subparsers(dest="subcommand", metavar="subcommand")
                    groups[group].required = True
                target = groups[group]
            else:
                name, target = definition.name, commands

            sub = target.add_parser(name, help=definition.description, description=definition.description)
            self._add_parameters(sub, definition)
            sub.set_defaults(tool_name=definition.name)

        return parser

    def _add_parameters(self, parser: argparse.ArgumentParser, definition: ToolDefinition):
        """Convert tool parameters to argparse arguments"""
        type_mapping = {"string": str, "number": float, "integer": int}

        for param in definition.parameters:
            if param.name in GLOBAL_PARAMETERS:
                continue

            help_text = param.description
            if param.default is not None:
                help_text += f" (default: {param.default})"

            if param.param_type == "boolean":
                parser.add_argument(_option_name(param), dest=param.name, action="store_true",
                                    default=None, help=param.description)
            elif param.param_type == "array":
                parser.add_argument(_option_name(param), dest=param.name, nargs="+",
                                    type=type_mapping.get(param.item_type, str), default=None, help=help_text)
            elif param.required and param.param_type == "string":
                # Required strings read naturally as positionals: `gini data.txt`, `pdf derived-gini`
                parser.add_argument(param.name, choices=param.enum_values, help=help_text)
            else:
                parser.add_argument(_option_name(param), dest=param.name, required=param.required,
                                    type=type_mapping.get(param.param_type, str),
                                    choices=param.enum_values, default=None, help=help_text)

    def list_commands(self) -> str:
        lines = []
        category = None
        for definition in sorted(registry.list_tools(), key=lambda d: (d.category, d.name)):
            if definition.category != category:
                category = definition.category
                lines.append(f"[{category}]")
            lines.append(f"{definition.name.replace('.', ' ')}: {definition.description}")
            for param in definition.parameters:
                if param.name in GLOBAL_PARAMETERS:
                    continue
                flag = param.name if param.required and param.param_type == "string" else _option_name(param)
                marker = " (required)" if param.required else ""
                lines.append(f"    {flag} [{param.param_type}]{marker}: {param.description}")
        return "\n".join(lines) + "\n"

    def _collect(self, args: argparse.Namespace) -> Dict[str, Any]:
        definition = registry.get_tool_definition(args.tool_name)
        params = {}
        for param in definition.parameters:
            # global flags share the parameter's name on the namespace
            value = getattr(args, param.name, None)
            if value is not None:
                params[param.name] = value
        return params

    def _print_result(self, result: ToolResult, plain: bool):
        if plain and result.plain is not None:
            self.stdout.write(result.plain + "\n")
            return
        content = result.content
        if content is None or content == "":
            return
        if isinstance(content, str):
            self.stdout.write(content if content.endswith("\n") else content + "\n")
        elif result.result_type == ToolResultType.JSON:
            self.stdout.write(json.dumps(content, indent=2, ensure_ascii=False) + "\n")
        else:
            self.stdout.write(str(content) + "\n")

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse argv, run the command and return its exit code"""
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            # argparse exits 2 on usage errors, 0 on --help
            return int(e.code or 0)

        if args.log_level:
            logging.getLogger().setLevel(args.log_level)

        if args.command == "list":
            self.stdout.write(self.list_commands())
            return 0

        tool = registry.get_tool(args.tool_name)
        try:
            params = tool.validate_parameters(self._collect(args))
        except GiniToolkitError as e:
            self.stderr.write(f"error: {e}\n")
            return e.exit_code

        logger.info(f"Running {args.tool_name}")
        result = asyncio.run(tool.execute(**params))

        if not result.success:
            self.stderr.write(f"error: {result.error_message}\n")
            return result.exit_code

        self._print_result(result, args.plain)
        logger.info(f"{args.tool_name} finished")
        return 0


def main(argv: Optional[List[str]] = None) -> int:
    return GiniCLI().run(argv)
