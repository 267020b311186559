"""Domain types and the linear cost model for two-copy object placement.

A placement stores an object in two distinct data centers.  Every client
writes to both copies (paying the slower link) and reads from the nearer
copy, so the total access latency of a placement is linear in the
per-client write/read rates, with coefficients given by the element-wise
max/min of the two latency columns.  Viewed in parameter x cost space,
each placement therefore contributes one hyperplane through the origin,
and all online queries in this package are geometry on those planes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InputError

EARTH_RADIUS_KM = 6371.0

VALID_ROLES = frozenset({"storage", "client"})


def _frozen(a, dtype=np.float64) -> np.ndarray:
    """Return a read-only float64 view of ``a`` (copying only if needed)."""
    arr = np.asarray(a, dtype=dtype)
    if not arr.flags.c_contiguous:
        arr = np.ascontiguousarray(arr)
    view = arr.view()
    view.flags.writeable = False
    return view


@dataclass(frozen=True)
class DataCenter:
    """A cloud location that may host object copies, issue requests, or both."""

    id: str
    lat_deg: float
    lon_deg: float
    roles: frozenset[str]

    def __post_init__(self):
        if not self.id:
            raise InputError("data center id must be non-empty")
        if not (math.isfinite(self.lat_deg) and -90.0 <= self.lat_deg <= 90.0):
            raise InputError(f"{self.id}: latitude {self.lat_deg} outside [-90, 90]")
        if not (math.isfinite(self.lon_deg) and -180.0 < self.lon_deg <= 180.0):
            raise InputError(f"{self.id}: longitude {self.lon_deg} outside (-180, 180]")
        roles = frozenset(self.roles)
        object.__setattr__(self, "roles", roles)
        if not roles:
            raise InputError(f"{self.id}: roles must be non-empty")
        if not roles <= VALID_ROLES:
            raise InputError(f"{self.id}: unknown roles {sorted(roles - VALID_ROLES)}")

    @property
    def is_storage(self) -> bool:
        return "storage" in self.roles

    @property
    def is_client(self) -> bool:
        return "client" in self.roles


class Catalog:
    """Ordered collection of data centers with unique ids.

    Iteration order is the order of construction; the derived ``clients``
    and ``storages`` tuples preserve it, and every other module aligns
    vectors and matrices to those orderings.
    """

    def __init__(self, datacenters):
        dcs = tuple(datacenters)
        by_id: dict[str, DataCenter] = {}
        for dc in dcs:
            if dc.id in by_id:
                raise InputError(f"duplicate data center id {dc.id!r}")
            by_id[dc.id] = dc
        self._dcs = dcs
        self._by_id = by_id

    def __iter__(self):
        return iter(self._dcs)

    def __len__(self) -> int:
        return len(self._dcs)

    def __getitem__(self, index: int) -> DataCenter:
        return self._dcs[index]

    def get(self, dc_id: str) -> DataCenter:
        try:
            return self._by_id[dc_id]
        except KeyError:
            raise InputError(f"unknown data center id {dc_id!r}") from None

    def __contains__(self, dc_id: str) -> bool:
        return dc_id in self._by_id

    @property
    def clients(self) -> tuple[DataCenter, ...]:
        return tuple(dc for dc in self._dcs if dc.is_client)

    @property
    def storages(self) -> tuple[DataCenter, ...]:
        return tuple(dc for dc in self._dcs if dc.is_storage)


@dataclass(frozen=True, eq=False)
class LatencyMatrix:
    """Client x storage network latencies in milliseconds."""

    clients: tuple[str, ...]
    storages: tuple[str, ...]
    values: np.ndarray  # |C| x |D|

    def __post_init__(self):
        object.__setattr__(self, "clients", tuple(self.clients))
        object.__setattr__(self, "storages", tuple(self.storages))
        values = _frozen(self.values)
        if values.ndim != 2 or values.shape != (len(self.clients), len(self.storages)):
            raise DimensionMismatch(
                f"latency matrix shape {values.shape} does not match "
                f"{len(self.clients)} clients x {len(self.storages)} storages"
            )
        if not np.all(np.isfinite(values)):
            raise InputError("latency matrix contains non-finite entries")
        if np.any(values < 0):
            raise InputError("latency matrix contains negative entries")
        object.__setattr__(self, "values", values)

    @property
    def n_clients(self) -> int:
        return len(self.clients)

    @property
    def n_storages(self) -> int:
        return len(self.storages)


@dataclass(frozen=True, eq=False)
class Workload:
    """Per-client write and read frequencies in requests/second."""

    w: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        w = _frozen(np.atleast_1d(self.w))
        r = _frozen(np.atleast_1d(self.r))
        if w.ndim != 1 or r.ndim != 1 or w.shape != r.shape:
            raise DimensionMismatch("w and r must be 1-D vectors of equal length")
        for name, vec in (("w", w), ("r", r)):
            if not np.all(np.isfinite(vec)):
                raise InputError(f"workload {name} contains non-finite entries")
            if np.any(vec < 0):
                raise InputError(f"workload {name} contains negative entries")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "r", r)

    @property
    def n_clients(self) -> int:
        return self.w.shape[0]

    def vector(self) -> np.ndarray:
        """Parameter vector [w, r] of length 2|C|."""
        return np.concatenate([self.w, self.r])


@dataclass(frozen=True, eq=False)
class Placement:
    """An unordered storage pair with its 2|C| latency coefficients.

    ``coeffs`` holds the per-client write coefficients (element-wise max of
    the two latency columns) followed by the read coefficients (element-wise
    min), so ``coeffs[i] >= coeffs[i + n_clients]`` always holds.
    """

    pair: tuple[str, str]
    coeffs: np.ndarray

    def __post_init__(self):
        pair = tuple(self.pair)
        if len(pair) != 2 or pair[0] == pair[1]:
            raise InputError(f"placement pair must name two distinct data centers, got {pair}")
        object.__setattr__(self, "pair", pair)
        coeffs = _frozen(self.coeffs)
        if coeffs.ndim != 1 or coeffs.shape[0] % 2 != 0 or coeffs.shape[0] == 0:
            raise DimensionMismatch("coeffs must be a non-empty 1-D vector of even length")
        half = coeffs.shape[0] // 2
        if not np.all(np.isfinite(coeffs)) or np.any(coeffs < 0):
            raise InputError(f"{pair}: coefficients must be finite and non-negative")
        if np.any(coeffs[:half] < coeffs[half:]):
            raise InputError(f"{pair}: write coefficient below read coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_clients(self) -> int:
        return self.coeffs.shape[0] // 2


@dataclass(frozen=True, eq=False)
class Oracle:
    """Precomputed plane matrix over the placements optimal for some workload.

    ``raw_planes`` row p is ``[coeffs_p, -1]``: the cost function of
    placement p written as a hyperplane through the origin of
    parameter x cost space.  ``unit_planes`` is the row-normalized copy
    used by the geometric drift queries; raw rows price workloads.
    """

    clients: tuple[str, ...]
    placements: tuple[Placement, ...]
    raw_planes: np.ndarray   # P x (2|C| + 1)
    unit_planes: np.ndarray  # same shape, rows unit length

    def __post_init__(self):
        object.__setattr__(self, "clients", tuple(self.clients))
        object.__setattr__(self, "placements", tuple(self.placements))
        raw = _frozen(self.raw_planes)
        unit = _frozen(self.unit_planes)
        n_params = 2 * len(self.clients)
        if len(self.placements) == 0:
            raise InputError("oracle needs at least one placement")
        if raw.shape != (len(self.placements), n_params + 1) or unit.shape != raw.shape:
            raise DimensionMismatch(
                f"plane matrices must be {len(self.placements)} x {n_params + 1}"
            )
        if np.any(raw[:, -1] != -1.0):
            raise InputError("last raw plane column must be identically -1")
        norms = np.linalg.norm(unit, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise InputError("unit plane rows must have Euclidean norm 1")
        object.__setattr__(self, "raw_planes", raw)
        object.__setattr__(self, "unit_planes", unit)

    @property
    def n_placements(self) -> int:
        return len(self.placements)

    @property
    def n_params(self) -> int:
        return 2 * len(self.clients)

    def coeff_rows(self) -> np.ndarray:
        """P x 2|C| view of the cost coefficients (raw planes minus the -1 column)."""
        return self.raw_planes[:, :-1]


def row_costs(coeff_rows: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Cost of each coefficient row under the parameter vector ``params``.

    Every cost evaluation in the package funnels through this reduction so
    that pruned and unpruned oracles, and the exhaustive baseline, all sum
    in the identical floating-point order.  BLAS matvec kernels do not
    guarantee that, so this deliberately stays an element-wise product plus
    a last-axis pairwise sum.
    """
    coeff_rows = np.asarray(coeff_rows, dtype=np.float64)
    params = np.asarray(params, dtype=np.float64)
    if coeff_rows.shape[-1] != params.shape[0]:
        raise DimensionMismatch(
            f"coefficient length {coeff_rows.shape[-1]} != parameter length {params.shape[0]}"
        )
    return (coeff_rows * params).sum(axis=-1)


def evaluate_cost(placement: Placement, workload: Workload) -> float:
    """Total weighted access latency of ``placement`` under ``workload``."""
    vec = workload.vector()
    if placement.coeffs.shape[0] != vec.shape[0]:
        raise DimensionMismatch(
            f"placement has {placement.coeffs.shape[0]} coefficients, "
            f"workload has {vec.shape[0]} parameters"
        )
    return float(row_costs(placement.coeffs, vec))


def haversine_km(a: DataCenter, b: DataCenter) -> float:
    """Great-circle distance between two data centers in kilometers."""
    lat1, lon1 = math.radians(a.lat_deg), math.radians(a.lon_deg)
    lat2, lon2 = math.radians(b.lat_deg), math.radians(b.lon_deg)
    h = (
        math.sin((lat2 - lat1) / 2.0) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def pairwise_haversine_km(lat_deg: np.ndarray, lon_deg: np.ndarray) -> np.ndarray:
    """Symmetric n x n great-circle distance matrix for coordinate vectors."""
    lat = np.radians(np.asarray(lat_deg, dtype=np.float64))
    lon = np.radians(np.asarray(lon_deg, dtype=np.float64))
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    h = np.sin(dlat / 2.0) ** 2 + np.cos(lat)[:, None] * np.cos(lat)[None, :] * np.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def lift_floor(workload: Workload) -> np.ndarray:
    """Lift a workload to the zero-cost floor of parameter x cost space: [w, r, 0]."""
    return np.concatenate([workload.w, workload.r, [0.0]])


def normalize_plane(raw_row: np.ndarray) -> np.ndarray:
    """Scale a plane row to unit Euclidean norm."""
    row = np.asarray(raw_row, dtype=np.float64)
    norm = float(np.linalg.norm(row))
    if norm == 0.0 or not math.isfinite(norm):
        raise InputError("cannot normalize a zero or non-finite plane row")
    return row / norm
