"""Exhaustive exact optimizer: the ground truth and timing foil for the oracle.

Evaluates every distance-feasible storage pair directly for one workload,
recomputing the max/min coefficients on each query so nothing is shared
with the precomputed oracle path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InfeasibleTopology
from .model import Catalog, LatencyMatrix, Workload, haversine_km, row_costs


@dataclass(frozen=True)
class BaselineResult:
    """Exact minimizer over all feasible pairs."""

    pair: tuple[str, str]
    cost: float
    pairs_evaluated: int
    wall_seconds: float


def solve_exhaustive(
    catalog: Catalog,
    latency: LatencyMatrix,
    workload: Workload,
    min_dist_km: float = 200.0,
) -> BaselineResult:
    """Minimize total access latency by brute force over unordered storage pairs.

    Ties break to the lexicographically smallest pair of data center ids.
    """
    vec = workload.vector()
    if vec.shape[0] != 2 * latency.n_clients:
        raise DimensionMismatch(
            f"workload has {vec.shape[0]} parameters, topology expects {2 * latency.n_clients}"
        )
    storages = [catalog.get(dc_id) for dc_id in latency.storages]
    values = latency.values

    t0 = time.perf_counter()
    best_cost = None
    best_pair = None
    evaluated = 0
    for i in range(len(storages)):
        for j in range(i + 1, len(storages)):
            if haversine_km(storages[i], storages[j]) < min_dist_km:
                continue
            coeffs = np.concatenate(
                [np.maximum(values[:, i], values[:, j]), np.minimum(values[:, i], values[:, j])]
            )
            cost = float(row_costs(coeffs, vec))
            evaluated += 1
            pair = tuple(sorted((storages[i].id, storages[j].id)))
            if best_cost is None or cost < best_cost or (cost == best_cost and pair < best_pair):
                best_cost = cost
                best_pair = pair
    wall = time.perf_counter() - t0

    if best_pair is None:
        raise InfeasibleTopology(f"no storage pair is at least {min_dist_km} km apart")
    return BaselineResult(pair=best_pair, cost=best_cost, pairs_evaluated=evaluated, wall_seconds=wall)
