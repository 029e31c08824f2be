"""Convex projective geometry of ends: Hilbert metrics, holonomy tests, lens constructions."""
__version__ = "0.1.0"
