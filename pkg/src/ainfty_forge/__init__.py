"""Exact computer algebra for graded A-infinity deformations of exterior algebras."""

__version__ = "0.1.0"
