"""Relative monads and their surrounding constructions, checked by brute force."""

__version__ = "0.1.0"
