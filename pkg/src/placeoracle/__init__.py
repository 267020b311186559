"""Placement oracles for fault-tolerant object storage.

Build a precomputed plane matrix over all non-dominated two-data-center
placements offline, then answer exact minimization, drift, and Monte Carlo
what-if queries online in milliseconds.
"""

from .baseline import BaselineResult, solve_exhaustive
from .builder import (
    BuildConfig,
    BuildReport,
    build_oracle,
    build_plane_matrix,
    enumerate_placements,
    prune_dominated,
)
from .errors import (
    DegenerateDrift,
    DimensionMismatch,
    InfeasibleTopology,
    InputError,
    OracleError,
    OracleFormatError,
)
from .io import (
    load_datacenters,
    load_latency_matrix,
    load_oracle,
    load_oracle_with_metadata,
    load_trace,
    save_oracle,
)
from .model import (
    Catalog,
    DataCenter,
    LatencyMatrix,
    Oracle,
    Placement,
    Workload,
    evaluate_cost,
    haversine_km,
    lift_floor,
    normalize_plane,
    row_costs,
)
from .queries import (
    DriftResult,
    MinResult,
    query_drift_directed,
    query_drift_undirected,
    query_minimum,
    ray_intersection_distance,
    tangent_direction,
)
from .simulate import SampleSpec, ScenarioSummary, generate_samples, simulate_scenario
from .synth import synthetic_topology

__version__ = "0.1.0"

__all__ = [
    "BaselineResult",
    "BuildConfig",
    "BuildReport",
    "Catalog",
    "DataCenter",
    "DegenerateDrift",
    "DimensionMismatch",
    "DriftResult",
    "InfeasibleTopology",
    "InputError",
    "LatencyMatrix",
    "MinResult",
    "Oracle",
    "OracleError",
    "OracleFormatError",
    "Placement",
    "SampleSpec",
    "ScenarioSummary",
    "Workload",
    "build_oracle",
    "build_plane_matrix",
    "enumerate_placements",
    "evaluate_cost",
    "generate_samples",
    "haversine_km",
    "lift_floor",
    "load_datacenters",
    "load_latency_matrix",
    "load_oracle",
    "load_oracle_with_metadata",
    "load_trace",
    "normalize_plane",
    "prune_dominated",
    "query_drift_directed",
    "query_drift_undirected",
    "query_minimum",
    "ray_intersection_distance",
    "row_costs",
    "save_oracle",
    "simulate_scenario",
    "solve_exhaustive",
    "synthetic_topology",
    "tangent_direction",
]
