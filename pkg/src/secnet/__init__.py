"""Secure network coding toolkit: attack models, leakage, and code constructions."""

__version__ = "0.1.0"
