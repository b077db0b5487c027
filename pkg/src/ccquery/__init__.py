"""Graph reconstruction from connected-component-count queries.

The package simulates an exact component-count oracle over a hidden graph and
provides the reconstruction algorithms and experiment harnesses built on it:
query subroutines, an adaptive sampling reconstructor with exact verification,
a two-round batched reconstructor, and lower-bound instance families.
"""

from .adaptive import (
    AdaptiveConfig,
    LevelPartition,
    SampleParams,
    adaptive_reconstruct,
    build_levels,
    expected_iterations,
    key_subroutine,
    reconstruct_bounded_degree_expected,
    reconstruct_bounded_degree_whp,
    sample_rate,
    verify_reconstruction,
    whp_iterations,
)
from .graph_core import (
    Edge,
    Graph,
    InstanceSpec,
    cc_count,
    clique_minus_edge,
    clique_minus_edge_shape,
    density,
    edge,
    from_edge_list_text,
    generate,
    gnm_graph,
    random_forest,
    star_graph,
    to_edge_list_text,
    two_path_pair,
)
from .lab import (
    AdaptiveLbAdapter,
    ExperimentConfig,
    distinguishing_pairs,
    emit_csv,
    main,
    materialize_lb_instance,
    parse_csv_text,
    run_experiment,
)
from .oracle import BatchContractError, CcOracle, QueryBudgetExceeded, QueryLedger
from .primitives import (
    ForestBudget,
    binary_search_reconstruct,
    density_reconstruct,
    find_adjacent_to_set,
    find_high_degree,
    find_neighbors_in_known_subgraph,
    greedy_color_classes,
    has_cross_edge,
    has_neighbor,
    high_degree_iterations,
    reconstruct_forest,
)
from .reporting import ReconstructionReport
from .two_round import (
    GROUP_TEST_RATE,
    DegreePlan,
    GroupTestPlan,
    decode_degree,
    decode_neighborhood,
    degree_repetitions,
    estimate_degree,
    group_test_query_count,
    or_query_via_cc,
    plan_degree,
    plan_neighborhood,
    resolve_profile,
    submit_degree_plan,
    submit_neighborhood_plan,
    two_round_reconstruct,
)

__all__ = [
    "AdaptiveConfig",
    "AdaptiveLbAdapter",
    "BatchContractError",
    "CcOracle",
    "DegreePlan",
    "Edge",
    "ExperimentConfig",
    "ForestBudget",
    "GROUP_TEST_RATE",
    "Graph",
    "GroupTestPlan",
    "InstanceSpec",
    "LevelPartition",
    "QueryBudgetExceeded",
    "QueryLedger",
    "ReconstructionReport",
    "SampleParams",
    "adaptive_reconstruct",
    "binary_search_reconstruct",
    "build_levels",
    "cc_count",
    "clique_minus_edge",
    "clique_minus_edge_shape",
    "decode_degree",
    "decode_neighborhood",
    "degree_repetitions",
    "density",
    "density_reconstruct",
    "distinguishing_pairs",
    "edge",
    "emit_csv",
    "estimate_degree",
    "expected_iterations",
    "find_adjacent_to_set",
    "find_high_degree",
    "find_neighbors_in_known_subgraph",
    "from_edge_list_text",
    "generate",
    "gnm_graph",
    "greedy_color_classes",
    "group_test_query_count",
    "has_cross_edge",
    "has_neighbor",
    "high_degree_iterations",
    "key_subroutine",
    "main",
    "materialize_lb_instance",
    "or_query_via_cc",
    "parse_csv_text",
    "plan_degree",
    "plan_neighborhood",
    "random_forest",
    "reconstruct_bounded_degree_expected",
    "reconstruct_bounded_degree_whp",
    "reconstruct_forest",
    "resolve_profile",
    "run_experiment",
    "sample_rate",
    "star_graph",
    "submit_degree_plan",
    "submit_neighborhood_plan",
    "to_edge_list_text",
    "two_path_pair",
    "two_round_reconstruct",
    "verify_reconstruction",
    "whp_iterations",
]
