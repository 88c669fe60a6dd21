"""Finite-dimensional algebras, directed stratifications and their homological invariants."""

__version__ = "0.1.0"
