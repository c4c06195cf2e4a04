"""Character network mining, analytics and random-graph model selection."""

from .graph import Graph, GraphError, GraphStats, complement, global_stats, load_edge_csv, read_gexf, write_gexf

__version__ = "0.1.0"

__all__ = ["Graph", "GraphError", "GraphStats", "complement", "global_stats", "load_edge_csv", "read_gexf", "write_gexf"]
