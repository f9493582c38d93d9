"""Exact computer-algebra workbench for quiver representations over F_p."""

from .backends import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
