"""Exact computer algebra for pre-Lie algebras, their star products and PBW maps."""

__version__ = "0.1.0"
