"""Aggreason: approximate reasoning with aggregation functions and fuzzy implications."""

__version__ = "0.1.0"
