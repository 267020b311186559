"""Deterministic synthetic topologies for benchmarks, demos, and tests.

Storage sites sit on a latitude/longitude grid spaced so that every pair
clears the default 200 km constraint, which makes candidate counts exactly
n*(n-1)/2.  Latencies come from a Philox stream keyed by the seed, so the
same arguments always produce the same topology on any platform.

Two latency profiles are provided: ``uniform`` draws i.i.d. latencies
(little dominance, worst-case pruning), while ``correlated`` gives each
storage site a base quality plus additive per-client noise scaled by
``noise`` (a fraction of the latency span), which makes most pairs
dominated and exercises heavy pruning.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .model import Catalog, DataCenter, LatencyMatrix

_MASK64 = (1 << 64) - 1

PROFILES = ("uniform", "correlated")


def _grid(n: int, jitter: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """n points on a lat/lon grid inside [-60, 60] x [-180, 180)."""
    cols = max(2, math.ceil(math.sqrt(n)))
    rows = math.ceil(n / cols)
    lat_steps = np.linspace(-60.0, 60.0, rows) if rows > 1 else np.array([0.0])
    lon_steps = np.arange(cols) * (360.0 / cols) - 180.0
    lats = np.repeat(lat_steps, cols)[:n]
    lons = np.tile(lon_steps, rows)[:n] + jitter
    return lats, np.where(lons <= -180.0, lons + 360.0, lons)


def synthetic_topology(
    n_storages: int,
    n_clients: int,
    seed: int = 0,
    low: float = 1.0,
    high: float = 300.0,
    profile: str = "uniform",
    noise: float = 0.2,
) -> tuple[Catalog, LatencyMatrix]:
    """Build a reproducible catalog plus latency matrix."""
    if n_storages < 2:
        raise InputError("need at least two storage data centers")
    if n_clients < 1:
        raise InputError("need at least one client data center")
    if profile not in PROFILES:
        raise InputError(f"profile must be one of {PROFILES}, got {profile!r}")

    s_lat, s_lon = _grid(n_storages)
    c_lat, c_lon = _grid(n_clients, jitter=1.0)
    dcs = [
        DataCenter(f"d{k:03d}", float(s_lat[k]), float(s_lon[k]), frozenset({"storage"}))
        for k in range(n_storages)
    ]
    dcs += [
        DataCenter(f"c{k:03d}", float(c_lat[k]), float(c_lon[k]), frozenset({"client"}))
        for k in range(n_clients)
    ]
    catalog = Catalog(dcs)

    gen = np.random.Generator(np.random.Philox(key=np.array([seed & _MASK64, 0], dtype=np.uint64)))
    if profile == "uniform":
        values = gen.uniform(low, high, size=(n_clients, n_storages))
    else:
        base = np.linspace(low, high, n_storages)
        amplitude = noise * (high - low)
        values = base[None, :] + amplitude * gen.uniform(0.0, 1.0, size=(n_clients, n_storages))
    latency = LatencyMatrix(
        clients=tuple(f"c{k:03d}" for k in range(n_clients)),
        storages=tuple(f"d{k:03d}" for k in range(n_storages)),
        values=values,
    )
    return catalog, latency
