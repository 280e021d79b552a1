"""Exact computations with raviolo vertex algebras."""

__version__ = "0.1.0"
