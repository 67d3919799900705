"""
Fat-Tail Gini Toolkit: __init__.py
Description: Command framework (definitions, registry, errors)
"""
