"""Offline oracle construction: pair enumeration, dominance pruning, plane assembly.

The build walks every unordered storage pair that clears the minimum
distance, resolves the max/min latency terms into plain linear
coefficients, discards pairs whose coefficient vector is weakly dominated
by another pair's (such pairs are never optimal for any non-negative
workload), and packs the survivors into the plane matrices queried online.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleTopology, InputError
from .model import (
    Catalog,
    LatencyMatrix,
    Oracle,
    Placement,
    pairwise_haversine_km,
)


@dataclass(frozen=True)
class BuildConfig:
    """Knobs for oracle construction."""

    min_dist_km: float = 200.0
    prune: bool = True
    parallel_chunks: int = 1

    def __post_init__(self):
        if not math.isfinite(self.min_dist_km) or self.min_dist_km < 0:
            raise InputError(f"min_dist_km must be finite and >= 0, got {self.min_dist_km}")
        if self.parallel_chunks < 1:
            raise InputError(f"parallel_chunks must be >= 1, got {self.parallel_chunks}")


@dataclass(frozen=True)
class BuildReport:
    """Counts and per-phase wall times of one build."""

    candidates_enumerated: int
    pruned: int
    retained: int
    enumerate_seconds: float
    prune_seconds: float
    assemble_seconds: float

    def __post_init__(self):
        if self.retained != self.candidates_enumerated - self.pruned:
            raise InputError("retained must equal candidates_enumerated - pruned")

    @property
    def total_seconds(self) -> float:
        return self.enumerate_seconds + self.prune_seconds + self.assemble_seconds

    def as_dict(self) -> dict:
        return {
            "candidates_enumerated": self.candidates_enumerated,
            "pruned": self.pruned,
            "retained": self.retained,
            "enumerate_seconds": self.enumerate_seconds,
            "prune_seconds": self.prune_seconds,
            "assemble_seconds": self.assemble_seconds,
        }


def _feasible_pairs(catalog: Catalog, latency: LatencyMatrix, min_dist_km: float):
    """Index arrays (i, j), i < j, of storage pairs clearing the distance bound."""
    storages = [catalog.get(dc_id) for dc_id in latency.storages]
    if len(storages) < 2:
        raise InfeasibleTopology("need at least two storage data centers")
    lat = np.array([dc.lat_deg for dc in storages])
    lon = np.array([dc.lon_deg for dc in storages])
    dist = pairwise_haversine_km(lat, lon)
    ii, jj = np.triu_indices(len(storages), k=1)
    keep = dist[ii, jj] >= min_dist_km
    ii, jj = ii[keep], jj[keep]
    if ii.size == 0:
        raise InfeasibleTopology(
            f"no storage pair is at least {min_dist_km} km apart"
        )
    return ii, jj


def _pair_coeffs(values: np.ndarray, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    """k x 2|C| coefficient rows [write max, read min] for the given pair indices."""
    wmax = np.maximum(values[:, ii], values[:, jj])
    rmin = np.minimum(values[:, ii], values[:, jj])
    return np.ascontiguousarray(np.concatenate([wmax, rmin], axis=0).T)


def enumerate_placements(
    catalog: Catalog, latency: LatencyMatrix, cfg: BuildConfig | None = None
) -> list[Placement]:
    """Enumerate every distance-feasible unordered storage pair as a Placement.

    Pairs are visited once with index i < j in the order of
    ``latency.storages``; the output order is deterministic and is the
    placement order of any oracle built from it.
    """
    cfg = cfg or BuildConfig()
    ii, jj = _feasible_pairs(catalog, latency, cfg.min_dist_km)
    values = latency.values

    bounds = np.linspace(0, ii.size, cfg.parallel_chunks + 1).astype(int)
    ranges = [(bounds[k], bounds[k + 1]) for k in range(cfg.parallel_chunks) if bounds[k] < bounds[k + 1]]
    if len(ranges) <= 1:
        coeffs = _pair_coeffs(values, ii, jj)
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            blocks = list(pool.map(lambda rg: _pair_coeffs(values, ii[rg[0]:rg[1]], jj[rg[0]:rg[1]]), ranges))
        coeffs = np.vstack(blocks)
    coeffs.flags.writeable = False

    storages = latency.storages
    return [
        Placement((storages[i], storages[j]), coeffs[k])
        for k, (i, j) in enumerate(zip(ii.tolist(), jj.tolist()))
    ]


def _dominated_mask(coeffs: np.ndarray) -> np.ndarray:
    """Boolean mask of rows weakly dominated by another row.

    Row p is dominated when some row p' is element-wise <= with at least
    one strict coordinate, or equals p exactly with a smaller index
    (duplicate collapse).  Rows are processed in ascending coefficient-sum
    order so each candidate only needs to be checked against the rows
    already retained: any dominator of p either survived, or was itself
    removed by a survivor that transitively dominates p.  Rows whose sums
    collide in floating point are resolved pairwise within their group,
    since the sort order cannot separate them reliably.
    """
    n, m = coeffs.shape
    sums = coeffs.sum(axis=1)
    order = np.lexsort((np.arange(n), sums))
    dominated = np.zeros(n, dtype=bool)
    retained = np.empty_like(coeffs)
    k = 0

    pos = 0
    while pos < n:
        end = pos
        while end < n and sums[order[end]] == sums[order[pos]]:
            end += 1
        group = order[pos:end]

        # Rows retained so far all have strictly smaller sums, so an
        # all-<= hit here is genuine strict dominance.
        survivors = []
        for g in group:
            if k and bool(np.any(np.all(retained[:k] <= coeffs[g], axis=1))):
                dominated[g] = True
            else:
                survivors.append(g)

        # Equal-sum rows can still dominate each other (or be duplicates);
        # apply the exact rule pairwise inside the group.
        if len(survivors) > 1:
            for g in survivors:
                cg = coeffs[g]
                for h in survivors:
                    if h == g:
                        continue
                    ch = coeffs[h]
                    if np.all(ch <= cg) and (np.any(ch < cg) or h < g):
                        dominated[g] = True
                        break

        for g in survivors:
            if not dominated[g]:
                retained[k] = coeffs[g]
                k += 1
        pos = end

    return dominated


def prune_dominated(placements: list[Placement]) -> tuple[list[Placement], int]:
    """Drop placements whose coefficients are weakly dominated by another's.

    Keeps the first of any exactly-equal coefficient vectors; returns the
    retained placements in their original order plus the pruned count.  At
    least one placement always survives.
    """
    if not placements:
        raise InputError("prune_dominated requires a non-empty placement list")
    coeffs = np.stack([p.coeffs for p in placements])
    dominated = _dominated_mask(coeffs)
    retained = [p for p, d in zip(placements, dominated) if not d]
    return retained, int(dominated.sum())


def build_plane_matrix(placements: list[Placement], clients) -> Oracle:
    """Assemble the raw and unit plane matrices of an oracle.

    Raw row p is ``[coeffs_p, -1]``: the cost c = l_p . a rewritten as the
    hyperplane l_p . a - c = 0 through the origin of parameter x cost space.
    """
    if not placements:
        raise InputError("cannot build an oracle from zero placements")
    coeffs = np.stack([p.coeffs for p in placements])
    raw = np.concatenate([coeffs, np.full((coeffs.shape[0], 1), -1.0)], axis=1)
    # Rows are never zero (trailing -1), so this matches normalize_plane row by row.
    unit = raw / np.linalg.norm(raw, axis=1)[:, None]
    return Oracle(clients=tuple(clients), placements=tuple(placements), raw_planes=raw, unit_planes=unit)


def build_oracle(
    catalog: Catalog, latency: LatencyMatrix, cfg: BuildConfig | None = None
) -> tuple[Oracle, BuildReport]:
    """Enumerate, prune (unless disabled), and assemble an oracle."""
    cfg = cfg or BuildConfig()

    t0 = time.perf_counter()
    candidates = enumerate_placements(catalog, latency, cfg)
    t1 = time.perf_counter()
    if cfg.prune:
        retained, pruned = prune_dominated(candidates)
    else:
        retained, pruned = candidates, 0
    t2 = time.perf_counter()
    oracle = build_plane_matrix(retained, latency.clients)
    t3 = time.perf_counter()

    report = BuildReport(
        candidates_enumerated=len(candidates),
        pruned=pruned,
        retained=len(retained),
        enumerate_seconds=t1 - t0,
        prune_seconds=t2 - t1,
        assemble_seconds=t3 - t2,
    )
    return oracle, report
