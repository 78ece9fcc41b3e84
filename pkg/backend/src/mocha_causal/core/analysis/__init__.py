"""Causal-graph analysis."""

from .causal_graph import CausalGraph, find_cycle_edges, path_count_matrix, threshold_graph

__all__ = ["CausalGraph", "find_cycle_edges", "path_count_matrix", "threshold_graph"]
