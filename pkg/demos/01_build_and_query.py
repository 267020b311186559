"""Build a placement oracle and ask it for optimal placements.

Walks the full offline-to-online path on a small hand-checkable topology:
enumerate storage pairs, prune dominated ones, assemble the plane matrix,
then answer minimization queries instantly and compare against the
exhaustive baseline.
"""

import numpy as np

from placeoracle import (
    BuildConfig,
    Catalog,
    DataCenter,
    LatencyMatrix,
    Workload,
    build_oracle,
    query_minimum,
    save_oracle,
    solve_exhaustive,
)

# --- a tiny topology: two client sites, three storage candidates ----------
catalog = Catalog(
    [
        DataCenter("d1", 0.0, 0.0, frozenset({"storage"})),
        DataCenter("d2", 0.0, 10.0, frozenset({"storage"})),
        DataCenter("d3", 10.0, 0.0, frozenset({"storage"})),
        DataCenter("c1", 20.0, 0.0, frozenset({"client"})),
        DataCenter("c2", -20.0, 0.0, frozenset({"client"})),
    ]
)
latency = LatencyMatrix(
    clients=("c1", "c2"),
    storages=("d1", "d2", "d3"),
    values=np.array([[10.0, 20.0, 30.0], [30.0, 20.0, 10.0]]),
)

oracle, report = build_oracle(catalog, latency, BuildConfig(min_dist_km=200.0))
print(f"enumerated {report.candidates_enumerated} pairs, "
      f"pruned {report.pruned}, kept {report.retained}")
for p in oracle.placements:
    print(f"  {p.pair}: write {p.coeffs[:2].tolist()}  read {p.coeffs[2:].tolist()}")

# --- online: vertical ray shooting = one argmin over a matvec -------------
for w, r, label in [
    ([1, 0], [0, 0], "write-heavy client c1"),
    ([0, 0], [1, 1], "read-only, both clients"),
    ([2, 1], [5, 5], "mixed"),
]:
    wl = Workload(w=np.array(w, float), r=np.array(r, float))
    res = query_minimum(oracle, wl)
    exact = solve_exhaustive(catalog, latency, wl)
    print(f"{label:26s} -> {res.placement.pair} at cost {res.cost:g} "
          f"(baseline agrees: {res.cost == exact.cost})")

# --- persist for the CLI and the HTTP service ------------------------------
save_oracle(oracle, "t3.oracle", build_config=BuildConfig(), build_report=report)
print("wrote t3.oracle; try: placeoracle query --oracle t3.oracle --w 1,0 --r 0,0 --json")
