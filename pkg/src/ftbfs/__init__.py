"""Fault-tolerant BFS structures that trade backup edges for reinforced edges."""
from .construction import FtBfsStructure, baseline_ftbfs, build_eps_ftbfs, compute_unprotected, prepare
from .graph import BfsTree, Graph, build_bfs_tree, parse_graph, shortest_path
from .lowerbound import audit_lb, gen_multi_source, gen_single_source
from .replacement import pcons_all, pcons_pair
from .verify import enumerate_all_shortest, minimal_reinforcement_oracle, verify_structure

__all__ = [
    "BfsTree", "FtBfsStructure", "Graph", "audit_lb", "baseline_ftbfs", "build_bfs_tree",
    "build_eps_ftbfs", "compute_unprotected", "enumerate_all_shortest", "gen_multi_source",
    "gen_single_source", "minimal_reinforcement_oracle", "parse_graph", "pcons_all", "pcons_pair",
    "prepare", "shortest_path", "verify_structure",
]
