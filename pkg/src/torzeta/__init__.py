"""Anticanonical height zeta functions of twisted toric varieties over F_q(t)."""

__version__ = "0.1.0"
