"""Typical versus worst-case mixing of open quantum systems."""

__version__ = "0.1.0"
