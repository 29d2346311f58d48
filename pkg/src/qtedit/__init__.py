"""Exact quasi-threshold editing by branch and bound."""
from .analysis import SolutionAnalyzer, SolutionSummary, components, meet, summarize
from .estimator import QuasiThresholdEditor
from .graph import Edit, Graph, PairMatrix, permute_nodes
from .io import RunRecord, parse_edge_list, parse_similarity_matrix
from .parallel import WorkStealingPool, run_parallel
from .search import SearchConfig, SearchResult, search_k, solve
from .subgraph import PairCounters, is_quasi_threshold, list_global, list_near

__all__ = [
    "Edit",
    "Graph",
    "PairCounters",
    "PairMatrix",
    "QuasiThresholdEditor",
    "RunRecord",
    "SearchConfig",
    "SearchResult",
    "SolutionAnalyzer",
    "SolutionSummary",
    "WorkStealingPool",
    "components",
    "is_quasi_threshold",
    "list_global",
    "list_near",
    "meet",
    "parse_edge_list",
    "parse_similarity_matrix",
    "permute_nodes",
    "run_parallel",
    "search_k",
    "solve",
    "summarize",
]
__version__ = "0.1.0"
