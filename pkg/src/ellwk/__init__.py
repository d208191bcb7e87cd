"""Elliptic Weyl group invariants and Frobenius structures."""

__version__ = "0.1.0"
