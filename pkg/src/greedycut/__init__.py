"""Greedy normalized-cut graph clustering."""

from .engine import (
    ClusterRecord,
    EngineState,
    MergeStep,
    MergeTrace,
    Partition,
    RunOptions,
    RunReport,
    best_pair,
    delta_formula,
    init_state,
    merge,
    objective_of_state,
    run,
)
from .errors import *  # noqa: F401,F403
from .graph import (
    SparseGraph,
    ValidationReport,
    dump_edge_list,
    from_edges,
    from_scipy,
    laplacian_entry,
    load_edge_list,
    read_edge_list,
    validate,
    write_edge_list,
)
from .neighbors import NeighborLists, clr_weights, default_k, knn, knn_graph, read_features, zscore
from .metrics import acc, ari, contingency, ncut, nmi
from .oracle import exhaustive_best_ncut, naive_run

__version__ = "0.1.0"
