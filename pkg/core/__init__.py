"""Finite-dimensional AW*-algebra toolkit: engines, codec and self-test plumbing."""

__version__ = "0.1.0"
