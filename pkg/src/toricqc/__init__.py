"""Quantum cohomology of toric degenerations and extremal transitions, in exact arithmetic."""

__version__ = "0.1.0"
