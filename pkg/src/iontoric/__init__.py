"""Toric-code Monte Carlo comparison of trapped-ion qubit encodings."""

__version__ = "0.1.0"
