"""Exact computations for classical-group Hecke algebras and their Galois side."""

__version__ = "0.1.0"
