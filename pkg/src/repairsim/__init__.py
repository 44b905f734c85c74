"""Similarity-guided ranking of repair ingredients for redundancy-based program repair."""

__version__ = "0.1.0"
