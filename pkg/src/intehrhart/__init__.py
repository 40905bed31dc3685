"""Intermediate weighted Ehrhart quasi-polynomials of parametric rational polytopes."""

__version__ = "0.1.0"
