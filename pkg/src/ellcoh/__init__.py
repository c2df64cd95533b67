"""Exact cohomology of configuration spaces of points on an elliptic curve."""

__version__ = "0.1.0"
