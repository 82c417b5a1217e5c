"""Lorentzian polynomials, hyperbolicity cones, mixed discriminants and permanents."""

__version__ = "0.1.0"
