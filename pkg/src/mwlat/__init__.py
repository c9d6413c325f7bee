"""Exact Mordell-Weil lattice computations for the surfaces
y^2 = x^3 + t^n + 1/t^n and their rational base quotients."""

__version__ = "0.1.0"
