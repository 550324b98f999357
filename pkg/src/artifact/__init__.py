"""Bounded verification laboratory for iterated function systems driven by shift spaces."""

__version__ = "0.1.0"
