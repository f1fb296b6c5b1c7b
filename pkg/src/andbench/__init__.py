"""Toolkit for building and benchmarking author-name-disambiguation gold standards."""

__version__ = "0.1.0"
