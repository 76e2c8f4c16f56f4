"""Exact verification pipeline for the Milnor monodromy of the G31 arrangement."""

__version__ = "0.1.0"
