"""Exact wall-crossing engine for DT type series of flopping contractions."""

__all__ = ["__version__"]

__version__ = "1.0.0"
