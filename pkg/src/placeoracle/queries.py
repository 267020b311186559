"""Online geometric queries on an oracle.

Minimization is vertical ray-shooting: lift the workload to the zero-cost
floor and take the first plane hit straight above, which collapses to an
argmin over one matrix-vector product.  Drift queries travel along the
current optimum's plane and report the first crossing with a neighboring
plane, either along a given drift direction or, for the undirected case,
along the closed-form tangent direction that minimizes the crossing
distance per plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDrift, DimensionMismatch, InputError
from .model import Oracle, Placement, Workload, row_costs

# Planes whose normals are this close to (anti-)parallel never cross the
# travel ray; treat them as unreachable.
EPS_PARALLEL = 1e-12

DRIFT_MODES = ("lifted", "projected")


@dataclass(frozen=True)
class MinResult:
    """Optimal placement for one workload."""

    placement_index: int
    placement: Placement
    cost: float


@dataclass(frozen=True, eq=False)
class DriftResult:
    """First optimum change along a drift, or unbounded when none exists.

    ``distance`` is Euclidean arc length in parameter x cost space; for
    unbounded results it is +inf and the remaining fields are None.
    """

    next_index: int | None
    param_next: np.ndarray | None
    cost_next: float | None
    distance: float

    @property
    def unbounded(self) -> bool:
        return self.next_index is None


_UNBOUNDED = DriftResult(next_index=None, param_next=None, cost_next=None, distance=math.inf)


def _check_workload(oracle: Oracle, workload: Workload) -> np.ndarray:
    vec = workload.vector()
    if vec.shape[0] != oracle.n_params:
        raise DimensionMismatch(
            f"workload has {vec.shape[0]} parameters, oracle expects {oracle.n_params}"
        )
    return vec


def query_minimum(oracle: Oracle, workload: Workload) -> MinResult:
    """Placement with minimal cost for ``workload``; ties go to the lowest index."""
    vec = _check_workload(oracle, workload)
    costs = row_costs(oracle.coeff_rows(), vec)
    idx = int(np.argmin(costs))  # argmin returns the first (lowest-index) minimum
    return MinResult(placement_index=idx, placement=oracle.placements[idx], cost=float(costs[idx]))


def ray_intersection_distance(start: np.ndarray, direction: np.ndarray, plane: np.ndarray) -> float:
    """Signed travel t where ``start + t*direction`` meets a plane through the origin.

    Returns +inf when the direction is parallel to the plane.  ``direction``
    must be unit length so t doubles as Euclidean distance.
    """
    start = np.asarray(start, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    plane = np.asarray(plane, dtype=np.float64)
    if abs(float(np.linalg.norm(direction)) - 1.0) > 1e-9:
        raise InputError("direction must be a unit vector")
    den = float(np.dot(direction, plane))
    if abs(den) < EPS_PARALLEL:
        return math.inf
    return -float(np.dot(start, plane)) / den


def tangent_direction(n0: np.ndarray, ni: np.ndarray):
    """Both unit directions tangent to plane n0 that minimize travel to plane ni.

    Returns ``(v_plus, v_minus)`` with v_minus = -v_plus, or None when the
    planes are parallel within tolerance.  Both inputs must be unit rows.
    """
    n0 = np.asarray(n0, dtype=np.float64)
    ni = np.asarray(ni, dtype=np.float64)
    alpha = float(np.dot(n0, ni))
    if alpha * alpha >= 1.0 - EPS_PARALLEL:
        return None
    v = (alpha * n0 - ni) / math.sqrt(1.0 - alpha * alpha)
    return v, -v


def query_drift_directed(
    oracle: Oracle,
    workload: Workload,
    direction: np.ndarray,
    mode: str = "lifted",
) -> DriftResult:
    """First optimum change when the workload drifts along ``direction``.

    ``lifted`` (default) moves the parameters exactly along ``direction``,
    lifting the cost coordinate so the motion stays inside the current
    plane.  ``projected`` instead projects the flat motion [direction, 0]
    orthogonally onto the current plane, which bends the parameter-space
    path whenever the plane is tilted.
    """
    if mode not in DRIFT_MODES:
        raise InputError(f"mode must be one of {DRIFT_MODES}, got {mode!r}")
    d = np.asarray(direction, dtype=np.float64)
    vec = _check_workload(oracle, workload)
    if d.shape != vec.shape:
        raise DimensionMismatch(f"drift direction must have length {vec.shape[0]}")
    if not np.all(np.isfinite(d)):
        raise InputError("drift direction contains non-finite entries")
    d_norm = float(np.linalg.norm(d))
    if d_norm == 0.0:
        raise DegenerateDrift("drift direction is the zero vector")

    current = query_minimum(oracle, workload)
    start = np.concatenate([vec, [current.cost]])

    if mode == "lifted":
        coeffs = oracle.raw_planes[current.placement_index, :-1]
        motion = np.concatenate([d, [float(np.dot(coeffs, d))]])
    else:
        lifted = np.concatenate([d, [0.0]])
        n0 = oracle.unit_planes[current.placement_index]
        motion = lifted - float(np.dot(lifted, n0)) * n0
    motion_norm = float(np.linalg.norm(motion))
    if motion_norm <= 1e-12 * d_norm:
        raise DegenerateDrift("drift motion is numerically zero in the current plane")
    unit_motion = motion / motion_norm

    if oracle.n_placements < 2:
        return _UNBOUNDED

    keep = np.ones(oracle.n_placements, dtype=bool)
    keep[current.placement_index] = False
    others = oracle.unit_planes[keep]
    numer = others @ start
    denom = others @ unit_motion
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(np.abs(denom) < EPS_PARALLEL, math.inf, -numer / denom)
    t = np.where(t > 0.0, t, math.inf)

    best = int(np.argmin(t))  # first minimum, so ties go to the lowest index
    if not math.isfinite(t[best]):
        return _UNBOUNDED
    next_index = int(np.flatnonzero(keep)[best])
    closest = start + float(t[best]) * unit_motion
    return DriftResult(
        next_index=next_index,
        param_next=closest[:-1],
        cost_next=float(closest[-1]),
        distance=float(t[best]),
    )


def query_drift_undirected(oracle: Oracle, workload: Workload) -> DriftResult:
    """Least drift in any direction that reaches another plane.

    For every other plane the closest crossing from the current point has
    the closed-form distance |s . n_i| / sqrt(1 - (n_i . n0)^2) along the
    optimal tangent direction; the answer is the plane minimizing it.
    Parallel planes never cross and are skipped; when nothing remains the
    result is unbounded.
    """
    current = query_minimum(oracle, workload)
    if oracle.n_placements < 2:
        return _UNBOUNDED
    vec = workload.vector()
    start = np.concatenate([vec, [current.cost]])
    n0 = oracle.unit_planes[current.placement_index]

    keep = np.ones(oracle.n_placements, dtype=bool)
    keep[current.placement_index] = False
    others = oracle.unit_planes[keep]
    alphas = others @ n0
    denom_sq = 1.0 - alphas * alphas
    numer = np.abs(others @ start)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.where(denom_sq <= EPS_PARALLEL, math.inf, numer / np.sqrt(np.maximum(denom_sq, 0.0)))

    best = int(np.argmin(dist))
    if not math.isfinite(dist[best]):
        return _UNBOUNDED
    next_index = int(np.flatnonzero(keep)[best])

    branches = tangent_direction(n0, others[best])
    v_plus, v_minus = branches
    t = ray_intersection_distance(start, v_plus, others[best])
    v = v_plus
    if t < 0.0:
        v, t = v_minus, -t
    closest = start + t * v
    return DriftResult(
        next_index=next_index,
        param_next=closest[:-1],
        cost_next=float(closest[-1]),
        distance=float(t),
    )
