"""Invariants and equivalence of paths in pseudo-Euclidean space."""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
