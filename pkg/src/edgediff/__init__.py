"""Degree-guided edge-removal diffusion for sparse graphs.

Forward corruption with exact marginals, an active-node-controlled noise
schedule solver, volume-preserved reverse sampling over pluggable edge
models, edge-overlap-controlled generation, and a graph-statistics
evaluation suite.
"""

from .errors import DegenerateStateError, EdgeDiffError, GraphFormatError, SolverError
from .forward import (
    NoiseSchedule,
    active_posterior,
    active_prob_given_prev_degree,
    degree_marginal_params,
    forward_marginal_sample,
    forward_trajectory,
    oracle_edge_posterior,
)
from .graph import (
    Graph,
    active_mask,
    active_subgraph_edge_count,
    degree_sequence,
    dump_edge_list,
    edge_overlap,
    load_edge_list,
    read_edge_list,
    write_edge_list,
)
from .sampling import (
    DegreeAffinityModel,
    EdgeModel,
    EdgeQuery,
    GenerationRun,
    OracleEdgeModel,
    SamplerMode,
    delta_edges,
    edge_model_degree_affinity,
    edge_model_oracle,
    edge_reweighted_probs,
    node_reweighted_posterior,
    sample_degree_guided,
    sample_with_eo_control,
)
from .schedule import (
    SolveReport,
    SolverConfig,
    baseline_linear_schedule,
    expected_active_curve,
    expected_active_nodes,
    expected_active_nodes_direct,
    gamma_library,
    read_schedule_csv,
    schedule_loss,
    solve_alphas_given_K,
    solve_schedule,
    write_schedule_csv,
)
from .stats import StatsReport, compute_stats

__version__ = "0.1.0"

__all__ = [
    "DegenerateStateError",
    "DegreeAffinityModel",
    "EdgeDiffError",
    "EdgeModel",
    "EdgeQuery",
    "GenerationRun",
    "Graph",
    "GraphFormatError",
    "NoiseSchedule",
    "OracleEdgeModel",
    "SamplerMode",
    "SolveReport",
    "SolverConfig",
    "SolverError",
    "StatsReport",
    "active_mask",
    "active_posterior",
    "active_prob_given_prev_degree",
    "active_subgraph_edge_count",
    "baseline_linear_schedule",
    "compute_stats",
    "degree_marginal_params",
    "degree_sequence",
    "delta_edges",
    "dump_edge_list",
    "edge_model_degree_affinity",
    "edge_model_oracle",
    "edge_overlap",
    "edge_reweighted_probs",
    "expected_active_curve",
    "expected_active_nodes",
    "expected_active_nodes_direct",
    "forward_marginal_sample",
    "forward_trajectory",
    "gamma_library",
    "load_edge_list",
    "node_reweighted_posterior",
    "oracle_edge_posterior",
    "read_edge_list",
    "read_schedule_csv",
    "sample_degree_guided",
    "sample_with_eo_control",
    "schedule_loss",
    "solve_alphas_given_K",
    "solve_schedule",
    "write_edge_list",
    "write_schedule_csv",
]
