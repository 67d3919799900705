"""
Fat-Tail Gini Toolkit: __init__.py
Description: Configuration package
"""

from .settings import Settings, settings

__all__ = ["Settings", "settings"]
