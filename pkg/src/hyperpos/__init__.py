"""Positivity certification for 2F3(a1, a2; b1, b2, b3; -x^2)."""
__version__ = "0.1.0"
