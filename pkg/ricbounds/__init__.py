"""Restricted isometry constant bounds for Gaussian matrices."""

__version__ = "0.1.0"
