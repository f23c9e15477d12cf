"""Exact computation of fusion groups and quadratic spaces for lattice orbifolds."""

__version__ = "0.1.0"
