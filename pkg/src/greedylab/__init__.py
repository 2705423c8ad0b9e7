"""Finite-dimensional laboratory for weak and Chebyshev thresholding greedy algorithms."""

__version__ = "0.1.0"
