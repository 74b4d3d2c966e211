"""Exact and numeric checks of the self-duality of open ASEP."""

__version__ = "0.1.0"
