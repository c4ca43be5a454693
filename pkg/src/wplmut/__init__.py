"""Exact workbench for mutations on weighted projective lines and their Lie-theoretic shadows."""

__version__ = "0.1.0"
