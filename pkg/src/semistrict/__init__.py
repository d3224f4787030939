"""Finite algebraic models of connected 3-types and their nerves."""
from .errors import SemistrictError
from .limits import LIMITS, caps

__all__ = ["LIMITS", "SemistrictError", "caps"]
__version__ = "0.1.0"
