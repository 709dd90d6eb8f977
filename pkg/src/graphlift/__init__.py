"""Graphlet counting by lifting: ordered, shotgun and unordered estimators."""

__version__ = "0.1.0"

from .catalog import (
    GraphletType,
    InducedSubgraph,
    DegreeProbabilityFunction,
    build_degree_function,
    classify,
    count_compatible_orderings,
    get_type,
    graphlet_types,
    pi_u_direct,
    pi_u_recursive,
)
from .datasets import DatasetError, fetch, load_dataset, load_graph
from .estimator import ExactGraphletCounter, LiftGraphletCounter
from .exceptions import (
    CannotExtendError,
    EmptyGraphError,
    GraphFormatError,
    InsufficientDataError,
    TooLargeError,
)
from .graph import Graph, QueryCounter, largest_component, load_edge_list, neighbors
from .lifting import (
    estimate,
    ordered_estimate,
    samples_for_budget,
    shotgun_estimate,
    unordered_estimate,
)
from .oracle import ExactCounts, enumerate_pi, exact_count, exact_moments
from .runs import EstimateRun
from .start import StartDistribution
from .stats import (
    TheoryBounds,
    lag_correlation,
    relative_variance,
    theory_bounds,
    variance_under_independence,
)

__all__ = [
    "CannotExtendError", "DatasetError", "DegreeProbabilityFunction", "EmptyGraphError",
    "EstimateRun", "ExactCounts", "ExactGraphletCounter", "Graph", "GraphFormatError",
    "GraphletType", "InducedSubgraph", "InsufficientDataError", "LiftGraphletCounter",
    "QueryCounter", "StartDistribution", "TheoryBounds", "TooLargeError",
    "build_degree_function", "classify", "count_compatible_orderings", "enumerate_pi",
    "estimate", "exact_count", "exact_moments", "fetch", "get_type", "graphlet_types",
    "lag_correlation", "largest_component", "load_dataset", "load_edge_list", "load_graph",
    "neighbors", "ordered_estimate", "pi_u_direct", "pi_u_recursive", "relative_variance",
    "samples_for_budget", "shotgun_estimate", "theory_bounds", "unordered_estimate",
    "variance_under_independence",
]
