"""Exact engine for a positive TFT built on the Brauer category."""

__version__ = "0.1.0"
