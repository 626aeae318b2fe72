"""Exact small-instance computations for free-product automorphism groups."""

__version__ = "0.1.0"
