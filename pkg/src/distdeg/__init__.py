"""Exact invariants of difference field extensions and scales of p-adic automorphisms."""

__version__ = "0.1.0"
