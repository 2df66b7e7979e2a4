"""Exact arithmetic and decision procedures for wreath products."""

__version__ = "0.1.0"
