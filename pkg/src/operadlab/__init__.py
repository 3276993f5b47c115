"""Exact-rational workbench for operads of coalgebras built from decomposed
associahedra, their brace-type images, and Hochschild-complex checks."""

__version__ = "0.1.0"
