"""Finite-dimensional Banach-space geometry laboratory."""

__version__ = "0.1.0"
