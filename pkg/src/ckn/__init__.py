"""Numerics for best constants and extremal profiles of weighted
fourth-order interpolation inequalities of Caffarelli-Kohn-Nirenberg type."""

__version__ = "0.1.0"
