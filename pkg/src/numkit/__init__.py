"""numkit: a compact scientific-computing core."""

__version__ = "0.1.0"
