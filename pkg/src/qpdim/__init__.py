"""Quasi-projective dimension and Koszul homology over local rings, computed exactly."""

from . import fpmodule  # noqa: F401  (loads before chaincomplex, which it depends on)

__version__ = "0.1.0"
