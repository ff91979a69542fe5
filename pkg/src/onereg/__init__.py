"""Tetravalent one-regular graphs of order 5p^2: construction and verification."""

__version__ = "0.1.0"
