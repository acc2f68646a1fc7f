"""Homological blocks of H-graph plumbings: classification, q-series, quantum sets."""

__version__ = "0.1.0"
