"""Directed low-diameter decomposition with exact verification tools."""
from .decomposer import LddConfig, LddResult, decompose
from .graph import Graph, VertexSet, build_graph, from_arrays, read_edge_list, write_edge_list
from .ldd_core import ConfigError
from .verify import estimate_cut_probs, scc, validate, weak_diameter

__all__ = [
    "ConfigError", "Graph", "LddConfig", "LddResult", "VertexSet", "build_graph", "decompose",
    "estimate_cut_probs", "from_arrays", "read_edge_list", "scc", "validate", "weak_diameter",
    "write_edge_list",
]
__version__ = "0.1.0"
