"""Rooted graph programs: rewriting, matching, and Turing machine simulation."""

__version__ = "0.1.0"
