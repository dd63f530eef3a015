"""Explicit verification toolkit for the cube-sum curves x^3 + y^3 = p and 3p^2."""

__version__ = "0.1.0"
