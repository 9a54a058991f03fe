"""Numerical laboratory for holomorphic curves in the nearly-Kähler 6-sphere."""

__version__ = "0.1.0"
