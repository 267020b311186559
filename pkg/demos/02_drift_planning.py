"""Migration planning with drift queries.

Directed drift answers "how far can the workload move along a known trend
before the optimum changes" (think diurnal shifts); undirected drift
answers "what is the least workload change, in any direction, that makes
us migrate" (think peak planning).  Both travel along the current
optimum's cost plane and report the first crossing with a neighbor.
"""

import numpy as np

from placeoracle import (
    Workload,
    build_oracle,
    query_drift_directed,
    query_drift_undirected,
    query_minimum,
    synthetic_topology,
)

catalog, latency = synthetic_topology(20, 4, seed=11)
oracle, _ = build_oracle(catalog, latency)
print(f"oracle over {oracle.n_placements} placements, {len(oracle.clients)} clients")

wl = Workload(w=np.array([2.0, 1.0, 0.5, 0.2]), r=np.array([4.0, 4.0, 1.0, 1.0]))
now = query_minimum(oracle, wl)
print(f"current optimum: {now.placement.pair} at cost {now.cost:.2f}")

# --- directed: client c002's writes keep growing ----------------------------
trend = np.zeros(8)
trend[2] = 1.0  # d(write rate of c002)/dt
res = query_drift_directed(oracle, wl, trend)
if res.unbounded:
    print("this trend never changes the optimum")
else:
    grown = res.param_next[2] - wl.vector()[2]
    print(f"after +{grown:.3f} req/s of c002 writes the optimum flips to "
          f"{oracle.placements[res.next_index].pair} "
          f"(cost {res.cost_next:.2f}, travel {res.distance:.3f})")
    print("knowing the growth rate, start migrating that far ahead of the flip")

# the alternative projection semantics bend the parameter path instead of
# following the stated trend; compare where each one ends up:
proj = query_drift_directed(oracle, wl, trend, mode="projected")
if not proj.unbounded:
    print(f"projected mode instead drifts every parameter: deltas "
          f"{np.round(proj.param_next - wl.vector(), 3).tolist()}")

# --- undirected: how safe is the current placement? ------------------------
least = query_drift_undirected(oracle, wl)
if least.unbounded:
    print("no neighboring plane: the placement is optimal for every workload")
else:
    print(f"least drift that forces a migration: {least.distance:.4f} "
          f"(to {oracle.placements[least.next_index].pair})")
    print("if forecast uncertainty stays inside that radius, skip the migration sim")
