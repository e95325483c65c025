"""Entanglement-swapping DSQC: state family, protocol, attacks and analysis."""

__version__ = "0.1.0"
