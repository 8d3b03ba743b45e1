"""Optimal asymmetric universal cloning: Gram matrices, trade-off solvers and a dense oracle."""

__version__ = "0.1.0"
