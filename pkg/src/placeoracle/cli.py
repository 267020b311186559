"""Command-line frontend: build, query, drift, simulate, bench, serve.

Exit codes: 0 success, 1 input error, 2 internal error.  Machine-readable
output is JSON on stdout when --json is given; bench writes CSV rows to a
file so stdout stays byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from .baseline import solve_exhaustive
from .builder import BuildConfig, build_oracle
from .errors import InputError
from .io import (
    load_datacenters,
    load_latency_matrix,
    load_oracle,
    load_trace,
    save_oracle,
)
from .model import Workload
from .queries import query_drift_directed, query_drift_undirected, query_minimum
from .simulate import SampleSpec, generate_samples, simulate_scenario
from .synth import synthetic_topology

SCHEMA = "v1"
BENCH_HEADER = ["suite", "size", "metric", "value"]


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as input errors (exit code 1)."""

    def error(self, message):
        raise InputError(message)


def _default_chunks() -> int:
    env = os.environ.get("ORACLE_THREADS", "")
    if env.strip():
        try:
            n = int(env)
        except ValueError:
            raise InputError(f"ORACLE_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise InputError(f"ORACLE_THREADS must be >= 1, got {n}")
        return n
    return 1


def _emit(payload: dict) -> None:
    print(json.dumps(payload))


def _parse_csv_floats(text: str, what: str) -> np.ndarray:
    try:
        return np.array([float(cell) for cell in text.split(",") if cell.strip() != ""])
    except ValueError as exc:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def _read_vector_file(path, expected_len: int, what: str) -> np.ndarray:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if row:
                rows.append(row)
    if len(rows) != 1:
        raise InputError(f"{path}: {what} file must contain exactly one CSV row")
    vals = _parse_csv_floats(",".join(rows[0]), what)
    if vals.shape[0] != expected_len:
        raise InputError(f"{path}: expected {expected_len} values, got {vals.shape[0]}")
    return vals


def _load_workload(args, oracle) -> Workload:
    n = len(oracle.clients)
    if args.workload is not None:
        vec = _read_vector_file(args.workload, 2 * n, "workload")
        return Workload(w=vec[:n], r=vec[n:])
    if args.w is None or args.r is None:
        raise InputError("provide either --workload FILE or both --w and --r")
    w = _parse_csv_floats(args.w, "--w")
    r = _parse_csv_floats(args.r, "--r")
    if w.shape[0] != n or r.shape[0] != n:
        raise InputError(f"--w and --r must each list {n} values")
    return Workload(w=w, r=r)


def _cmd_build(args) -> int:
    catalog = load_datacenters(args.datacenters)
    latency = load_latency_matrix(args.latency, catalog)
    cfg = BuildConfig(
        min_dist_km=args.min_dist_km,
        prune=not args.no_prune,
        parallel_chunks=args.chunks if args.chunks else _default_chunks(),
    )
    oracle, report = build_oracle(catalog, latency, cfg)
    save_oracle(oracle, args.output, build_config=cfg, build_report=report)
    _emit(
        {
            "schema": SCHEMA,
            "output": str(args.output),
            "candidates": report.candidates_enumerated,
            "pruned": report.pruned,
            "retained": report.retained,
        }
    )
    return 0


def _cmd_query(args) -> int:
    oracle = load_oracle(args.oracle)
    workload = _load_workload(args, oracle)
    res = query_minimum(oracle, workload)
    if args.json:
        _emit(
            {
                "schema": SCHEMA,
                "pair": list(res.placement.pair),
                "cost": res.cost,
                "placement_index": res.placement_index,
            }
        )
    else:
        print(f"pair={res.placement.pair[0]},{res.placement.pair[1]} cost={res.cost!r}")
    return 0


def _drift_payload(oracle, res, mode: str | None) -> dict:
    payload = {"schema": SCHEMA, "unbounded": res.unbounded}
    if mode is not None:
        payload["mode"] = mode
    if res.unbounded:
        payload.update({"next_index": None, "next_pair": None, "param_next": None,
                        "cost_next": None, "distance": None})
    else:
        payload.update(
            {
                "next_index": res.next_index,
                "next_pair": list(oracle.placements[res.next_index].pair),
                "param_next": [float(x) for x in res.param_next],
                "cost_next": res.cost_next,
                "distance": res.distance,
            }
        )
    return payload


def _cmd_drift(args) -> int:
    oracle = load_oracle(args.oracle)
    n = len(oracle.clients)
    workload = _load_workload(args, oracle)
    if args.direction is not None:
        direction = _read_vector_file(args.direction, 2 * n, "direction")
        res = query_drift_directed(oracle, workload, direction, mode=args.mode)
        payload = _drift_payload(oracle, res, args.mode)
    else:
        res = query_drift_undirected(oracle, workload)
        payload = _drift_payload(oracle, res, None)
    if args.json:
        _emit(payload)
    elif res.unbounded:
        print("unbounded: no plane crossing in this direction")
    else:
        pair = oracle.placements[res.next_index].pair
        print(f"next={pair[0]},{pair[1]} distance={res.distance!r} cost_next={res.cost_next!r}")
    return 0


def _parse_dist(text: str) -> tuple[str, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"--dist must look like uniform:LO:HI, got {text!r}")
    name = parts[0]
    try:
        lo, hi = float(parts[1]), float(parts[2])
    except ValueError as exc:
        raise InputError(f"--dist bounds must be numbers, got {text!r}") from exc
    return name, lo, hi


def _cmd_simulate(args) -> int:
    oracle_a = load_oracle(args.oracle_a)
    oracle_b = load_oracle(args.oracle_b)
    dims = 2 * len(oracle_a.clients)
    if args.trace is not None:
        trace = load_trace(args.trace, len(oracle_a.clients))
        if trace.shape[0] == 0:
            raise InputError(f"{args.trace}: trace is empty")
        spec = SampleSpec.from_trace(trace)
    else:
        if args.samples is None:
            raise InputError("provide --samples N (with --seed/--dist) or --trace FILE")
        name, lo, hi = _parse_dist(args.dist)
        spec = SampleSpec.synthetic(args.samples, distribution=name, low=lo, high=hi, seed=args.seed)
    samples = generate_samples(spec, dims)
    chunks = args.chunks if args.chunks else _default_chunks()
    summary = simulate_scenario(oracle_a, oracle_b, samples, chunks=chunks)
    if args.json:
        _emit({"schema": SCHEMA, **summary.as_dict()})
    else:
        lo, hi = summary.ci95
        print(
            f"mean={summary.mean_improvement!r} median={summary.median_improvement!r} "
            f"ci95=[{lo!r}, {hi!r}] samples={summary.samples_used} rejected={summary.rejected}"
        )
    return 0


def _bench_rows(suite: str, sizes: list[int], clients: int, seed: int, prune: bool):
    rows = []
    if suite == "build":
        for size in sizes:
            catalog, latency = synthetic_topology(size, clients, seed=seed)
            _, report = build_oracle(catalog, latency, BuildConfig(prune=prune))
            for metric, value in report.as_dict().items():
                rows.append((suite, size, metric, value))
    elif suite in ("query", "drift"):
        for size in sizes:
            catalog, latency = synthetic_topology(size, clients, seed=seed, profile="correlated")
            oracle, _ = build_oracle(catalog, latency, BuildConfig())
            gen = np.random.Generator(np.random.Philox(key=np.array([seed, 1], dtype=np.uint64)))
            workloads = [
                Workload(w=gen.uniform(0.0, 1.0, clients), r=gen.uniform(0.0, 1.0, clients))
                for _ in range(5)
            ]
            if suite == "query":
                t0 = time.perf_counter()
                for wl in workloads:
                    query_minimum(oracle, wl)
                oracle_s = (time.perf_counter() - t0) / len(workloads)
                t0 = time.perf_counter()
                for wl in workloads[:2]:
                    solve_exhaustive(catalog, latency, wl)
                base_s = (time.perf_counter() - t0) / 2
                rows.append((suite, size, "oracle_query_seconds", oracle_s))
                rows.append((suite, size, "baseline_query_seconds", base_s))
                rows.append((suite, size, "speedup", base_s / oracle_s if oracle_s > 0 else float("inf")))
            else:
                direction = np.ones(2 * clients)
                t0 = time.perf_counter()
                for wl in workloads:
                    query_drift_directed(oracle, wl, direction)
                rows.append((suite, size, "directed_seconds", (time.perf_counter() - t0) / len(workloads)))
                t0 = time.perf_counter()
                for wl in workloads:
                    query_drift_undirected(oracle, wl)
                rows.append((suite, size, "undirected_seconds", (time.perf_counter() - t0) / len(workloads)))
    elif suite == "simulate":
        catalog, latency = synthetic_topology(100, clients, seed=seed, profile="correlated")
        oracle, _ = build_oracle(catalog, latency, BuildConfig())
        for size in sizes:
            samples = generate_samples(SampleSpec.synthetic(size, seed=seed), 2 * clients)
            t0 = time.perf_counter()
            simulate_scenario(oracle, oracle, samples)
            rows.append((suite, size, "simulate_seconds", time.perf_counter() - t0))
    else:
        raise InputError(f"unknown bench suite {suite!r}")
    return rows


def _cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(f"--sizes must be a comma-separated integer list, got {args.sizes!r}") from exc
    if not sizes:
        raise InputError("--sizes is empty")
    rows = _bench_rows(args.suite, sizes, args.clients, args.seed, prune=not args.no_prune)
    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_HEADER)
        for row in rows:
            writer.writerow(row)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.oracle_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="placeoracle", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct an oracle from a topology")
    p.add_argument("--datacenters", required=True)
    p.add_argument("--latency", required=True)
    p.add_argument("--min-dist-km", type=float, default=200.0)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--chunks", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("query", help="optimal placement for a workload")
    p.add_argument("--oracle", required=True)
    p.add_argument("--workload")
    p.add_argument("--w")
    p.add_argument("--r")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("drift", help="nearest optimum change (directed or undirected)")
    p.add_argument("--oracle", required=True)
    p.add_argument("--workload")
    p.add_argument("--w")
    p.add_argument("--r")
    p.add_argument("--direction")
    p.add_argument("--mode", choices=["lifted", "projected"], default="lifted")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_drift)

    p = sub.add_parser("simulate", help="Monte Carlo what-if between two oracles")
    p.add_argument("--oracle-a", required=True)
    p.add_argument("--oracle-b", required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", default="uniform:0:1")
    p.add_argument("--trace")
    p.add_argument("--chunks", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bench", help="timing tables for plotting scripts")
    p.add_argument("--suite", required=True, choices=["build", "query", "drift", "simulate"])
    p.add_argument("--sizes", required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--clients", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="HTTP service over an oracle directory")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--oracle-dir", required=True)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal fault, not an input problem
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
