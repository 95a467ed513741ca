"""Simulation toolkit for quantum error correction on long trapped-ion chains."""

__version__ = "0.1.0"
