"""Adiabatic-passage single-photon emission from a hot atom in a high-Q cavity."""

__version__ = "0.1.0"
