"""Amplitudes of Toffoli-Hadamard circuits as permanents of integer matrices."""

__version__ = "0.1.0"
