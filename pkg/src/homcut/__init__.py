"""Cutwidth-parameterized graph homomorphism solver with representative-set reductions."""

from homcut.graphs import BoolMatrix, Graph, direct_product, kron_power
from homcut.solver import SolveReport, solve

__all__ = ["BoolMatrix", "Graph", "SolveReport", "direct_product", "kron_power", "solve"]
__version__ = "0.1.0"
