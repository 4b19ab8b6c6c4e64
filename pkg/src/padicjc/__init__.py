"""Exact-arithmetic workbench for the p-adic Jaynes-Cummings model."""

from .padic import INFINITY, PadicScalar, Prime, parse_scalar

__all__ = ["INFINITY", "PadicScalar", "Prime", "parse_scalar"]
__version__ = "0.1.0"
