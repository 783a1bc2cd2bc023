"""Isomorphism-invariant fingerprints of complete weighted graphs."""

from .census import CensusConfig, CensusReport, enumerate_graphs, merge_partial, run_census
from .errors import BudgetError, DomainError, GraphError, NotApplicableError, ParseError
from .experiment import random_real_graph, run_distribution_experiment
from .genericity import (
    check_generic_combined,
    check_generic_edge,
    check_generic_node,
    check_generic_vector_edge,
)
from .graph import (
    CanonicalForm,
    Domain,
    NodePermutation,
    WeightedGraph,
    apply_permutation,
    are_isomorphic,
    canonical_form,
    edge_weight,
    new_graph,
)
from .invariants import (
    CharPoly,
    Distribution,
    Multiset,
    Triangle,
    TriangleDistribution,
    adjacent_sum_component,
    adjacent_sum_distribution,
    characteristic_polynomial,
    component_distribution,
    delta_distribution,
    distributions_equal,
    edge_weight_distribution,
    encode_triangle_distribution,
    mixed_adjacent_sum,
    node_beta_distribution,
    node_component_distribution,
    subtriangle,
    triangle_distribution,
)
from .io import load_bundled, load_graph, parse_graph, serialize_graph
from .pairperm import PairPermutation, decompose_pair_perm, pair_perm_adjacency_property
from .reconstruct import (
    HypothesisReport,
    UniqueEdgeReport,
    check_corollary_distinct,
    check_triangle_theorem,
    reconstruct_mapping,
    unique_edge_set,
)

__version__ = "0.1.0"
