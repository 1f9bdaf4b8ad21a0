"""Alternative routes from reciprocal pointer chains in a pair of shortest-path trees."""

from .diversity import PathSet, diversity, diversity_lower_bound, jaccard_distance, neighborhood
from .estimators import LayerBoundaryDetector, ViaPathRouter
from .graph import (
    ROAD_SPEED_TABLE,
    DimacsError,
    Graph,
    GraphError,
    NodeGeometry,
    SpeedTable,
    apply_speed_model,
    load_graph,
    parse_coordinates,
    parse_dimacs,
    transpose,
    write_dimacs,
)
from .ksp import ReducedGraph, accelerated_ksp, accelerated_ksp_run, build_reduced_graph, yen_ksp
from .oracle import (
    BudgetExceeded,
    EnumerationBudget,
    brute_force_ksp,
    brute_force_via_cost,
    brute_force_via_costs,
    enumerate_maximal_plateaus,
    enumerate_simple_paths,
)
from .partition import (
    Partition,
    is_reciprocal,
    partition_disjoint_plateau,
    partition_rpc,
    partition_via_components,
)
from .pipeline import CvpResult, compute_cvps
from .ranking import CvpRecord, ExplicitPath, extract_cvp, format_hours, rank, score_chains, select_by_thresholds
from .spt import DEFAULT_TIES, ShortestPathTree, compute_spt, cvp_trees, shortest_path, via_cost, via_costs
from .trellis import (
    Boundary,
    CostMap,
    TrellisParams,
    build_trellis,
    check_non_crossing,
    detect_layers,
    planted_bands,
    read_costmap,
)

__version__ = "0.1.0"

__all__ = [
    "accelerated_ksp",
    "accelerated_ksp_run",
    "apply_speed_model",
    "Boundary",
    "brute_force_ksp",
    "brute_force_via_cost",
    "brute_force_via_costs",
    "BudgetExceeded",
    "build_reduced_graph",
    "build_trellis",
    "check_non_crossing",
    "compute_cvps",
    "compute_spt",
    "CostMap",
    "cvp_trees",
    "CvpRecord",
    "CvpResult",
    "DEFAULT_TIES",
    "detect_layers",
    "DimacsError",
    "diversity",
    "diversity_lower_bound",
    "enumerate_maximal_plateaus",
    "enumerate_simple_paths",
    "EnumerationBudget",
    "ExplicitPath",
    "extract_cvp",
    "format_hours",
    "Graph",
    "GraphError",
    "is_reciprocal",
    "jaccard_distance",
    "LayerBoundaryDetector",
    "load_graph",
    "neighborhood",
    "NodeGeometry",
    "parse_coordinates",
    "parse_dimacs",
    "Partition",
    "partition_disjoint_plateau",
    "partition_rpc",
    "partition_via_components",
    "PathSet",
    "planted_bands",
    "rank",
    "read_costmap",
    "ReducedGraph",
    "ROAD_SPEED_TABLE",
    "score_chains",
    "select_by_thresholds",
    "shortest_path",
    "ShortestPathTree",
    "SpeedTable",
    "transpose",
    "TrellisParams",
    "via_cost",
    "via_costs",
    "ViaPathRouter",
    "write_dimacs",
    "yen_ksp",
]
