"""Stochastic Polytope - exact computations on the polytope of n×n×n stochastic tensors."""

__version__ = "0.1.0"
