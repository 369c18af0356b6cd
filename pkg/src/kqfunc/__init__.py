"""Exact computations with K-theoretic Q-functions and their duals."""

__version__ = "0.1.0"
