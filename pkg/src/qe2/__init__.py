"""Exact symbolic engine for the quantum Euclidean group, its double and relatives."""

__version__ = "0.1.0"
