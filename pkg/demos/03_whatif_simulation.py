"""What-if scenario planning with Monte Carlo over two oracles.

A planner weighing an expansion builds one oracle per scenario (here:
storage restricted to half the sites vs. all sites) and samples thousands
of plausible workloads; each sample prices both scenarios exactly, and the
summary says how much latency the expansion buys.
"""

from placeoracle import (
    Catalog,
    LatencyMatrix,
    SampleSpec,
    build_oracle,
    generate_samples,
    simulate_scenario,
    synthetic_topology,
)

catalog, latency = synthetic_topology(40, 20, seed=21, profile="correlated")

# scenario A: only the 20 slowest sites are under contract today
half_ids = latency.storages[20:]
half_latency = LatencyMatrix(
    clients=latency.clients,
    storages=half_ids,
    values=latency.values[:, 20:],
)
half_catalog = Catalog([dc for dc in catalog if dc.is_client or dc.id in half_ids])

oracle_half, _ = build_oracle(half_catalog, half_latency)
oracle_full, _ = build_oracle(catalog, latency)
print(f"scenario A (half the sites): {oracle_half.n_placements} placements")
print(f"scenario B (all sites):      {oracle_full.n_placements} placements")

spec = SampleSpec.synthetic(count=20_000, distribution="uniform", low=0.0, high=5.0, seed=99)
samples = generate_samples(spec, 2 * len(latency.clients))
summary = simulate_scenario(oracle_half, oracle_full, samples, chunks=4)

lo, hi = summary.ci95
print(f"\nexpected cost ratio (B/A) over {summary.samples_used} samples:")
print(f"  mean   {summary.mean_improvement:.4f}")
print(f"  median {summary.median_improvement:.4f}")
print(f"  95% CI [{lo:.4f}, {hi:.4f}]")
print(f"  rejected zero-cost samples: {summary.rejected}")
if summary.mean_improvement < 1.0:
    print(f"expansion cuts expected latency by {(1 - summary.mean_improvement) * 100:.1f}%")
