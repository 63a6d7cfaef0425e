"""Thickness and divergence of right-angled Coxeter groups from their presentation graphs."""

from .graph import Graph, GraphFormatError, emit_graph6, parse_graph6
from .hypergraph import hypergraph_index
from .thickness import ThicknessReport, thickness_order

__version__ = "0.1.0"

__all__ = ["Graph", "GraphFormatError", "emit_graph6", "parse_graph6", "hypergraph_index",
           "ThicknessReport", "thickness_order", "__version__"]
