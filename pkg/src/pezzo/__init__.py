"""Exact-arithmetic tools for rational elliptic surfaces: Mordell-Weil
lattices, section geometry, blow-down cascades classifying Gorenstein log
del Pezzo surfaces of small Picard number, and Weierstrass fiber
analysis."""

__version__ = "0.1.0"
