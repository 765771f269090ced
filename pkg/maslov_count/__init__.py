"""Maslov count: eigenvalue counting for linear Hamiltonian systems via spectral flow."""

__version__ = "0.1.0"
