"""Median eigenvalues and average energy of bounded-degree graphs."""

from .graph import Graph, from_edge_list, from_graph6, to_graph6
from .spectral import Spectrum, average_energy, eigenvalues, median_eigenvalues
from .bounds import BoundReport, TheoremId, check_all

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "from_edge_list",
    "from_graph6",
    "to_graph6",
    "Spectrum",
    "eigenvalues",
    "median_eigenvalues",
    "average_energy",
    "BoundReport",
    "TheoremId",
    "check_all",
]
