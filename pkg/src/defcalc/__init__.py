"""Exact computations for operadic deformation complexes over the rationals."""

__version__ = "0.1.0"
