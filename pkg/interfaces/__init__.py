"""
Fat-Tail Gini Toolkit: __init__.py
Description: Front ends over the command registry
"""

from .cli import GiniCLI, main

__all__ = ["GiniCLI", "main"]
