"""Exact computations with quiver algebras, perfect complexes, silting
mutation and spherical twists."""

__version__ = "0.1.0"
