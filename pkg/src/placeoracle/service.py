"""HTTP facade over build, query, drift, and what-if simulation.

All endpoints live under /v1 and speak JSON; errors come back as
``{"error": kind, "detail": message}`` with 400 for malformed input, 404
for unknown ids, 413 for oversized build requests, 422 for dimension
mismatches, and 500 otherwise.  Oracles are immutable once registered, so
request handling is stateless and freely concurrent.
"""

from __future__ import annotations

import hashlib
import json
import re
import tempfile
import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .builder import BuildConfig, build_oracle
from .errors import DimensionMismatch, InputError, OracleError
from .io import (
    load_datacenters,
    load_latency_matrix,
    load_oracle_with_metadata,
)
from .model import Oracle, Workload
from .queries import query_drift_directed, query_drift_undirected, query_minimum
from .simulate import SampleSpec, generate_samples, simulate_scenario

TRACE_SUFFIX = ".trace.csv"
ORACLE_SUFFIX = ".oracle"


class OracleRegistry:
    """Immutable oracles and traces by id; additions are atomic publishes."""

    def __init__(self):
        self._oracles: dict[str, tuple[Oracle, dict]] = {}
        self._traces: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def load_directory(self, directory) -> None:
        directory = Path(directory)
        for path in sorted(directory.glob(f"*{ORACLE_SUFFIX}")):
            oracle, meta = load_oracle_with_metadata(path)
            self.add_oracle(path.name[: -len(ORACLE_SUFFIX)], oracle, meta)
        for path in sorted(directory.glob(f"*{TRACE_SUFFIX}")):
            trace_id = path.name[: -len(TRACE_SUFFIX)]
            # Traces are plain CSV; row width is validated against the oracle at use time.
            rows = [
                [float(cell) for cell in line.split(",")]
                for line in path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            ]
            with self._lock:
                self._traces[trace_id] = np.array(rows, dtype=np.float64)

    def add_oracle(self, oracle_id: str, oracle: Oracle, metadata: dict) -> None:
        with self._lock:
            if oracle_id not in self._oracles:
                self._oracles[oracle_id] = (oracle, metadata)

    def oracle(self, oracle_id: str):
        item = self._oracles.get(oracle_id)
        if item is None:
            raise KeyError(oracle_id)
        return item

    def trace(self, trace_id: str) -> np.ndarray:
        trace = self._traces.get(trace_id)
        if trace is None:
            raise KeyError(trace_id)
        return trace

    def oracle_ids(self) -> list[str]:
        return sorted(self._oracles)


class QueryBody(BaseModel):
    w: list[float]
    r: list[float]


class DriftBody(BaseModel):
    w: list[float]
    r: list[float]
    direction: list[float] | None = None
    mode: str = "lifted"


class WhatIfBody(BaseModel):
    oracle_a: str
    oracle_b: str
    samples: int | None = None
    seed: int = 0
    distribution: str = "uniform"
    low: float = 0.0
    high: float = 1.0
    trace_id: str | None = None
    chunks: int = 1


def _error(status: int, kind: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": kind, "detail": detail})


def _workload(oracle: Oracle, w: list[float], r: list[float]) -> Workload:
    n = len(oracle.clients)
    if len(w) != n or len(r) != n:
        raise DimensionMismatch(f"w and r must each have {n} entries for this oracle")
    return Workload(w=np.asarray(w, dtype=np.float64), r=np.asarray(r, dtype=np.float64))


def _drift_json(oracle: Oracle, res) -> dict:
    if res.unbounded:
        return {
            "unbounded": True,
            "next_index": None,
            "next_pair": None,
            "param_next": None,
            "cost_next": None,
            "distance": None,
        }
    return {
        "unbounded": False,
        "next_index": res.next_index,
        "next_pair": list(oracle.placements[res.next_index].pair),
        "param_next": [float(x) for x in res.param_next],
        "cost_next": res.cost_next,
        "distance": res.distance,
    }


def _parse_multipart(body: bytes, content_type: str) -> dict[str, bytes]:
    """Minimal multipart/form-data parser (the build endpoint's only need)."""
    match = re.search(r'boundary="?([^";]+)"?', content_type or "")
    if not match:
        raise InputError("multipart request without a boundary")
    boundary = b"--" + match.group(1).encode("utf-8")
    fields: dict[str, bytes] = {}
    chunks = body.split(boundary)
    for chunk in chunks[1:]:
        if chunk.startswith(b"--"):
            break  # closing delimiter
        chunk = chunk.lstrip(b"\r\n")
        head, sep, payload = chunk.partition(b"\r\n\r\n")
        if not sep:
            continue
        if payload.endswith(b"\r\n"):
            payload = payload[:-2]
        name_match = re.search(rb'name="([^"]+)"', head)
        if name_match:
            fields[name_match.group(1).decode("utf-8")] = payload
    return fields


def create_app(oracle_dir=None, max_build_datacenters: int = 400) -> FastAPI:
    """Application over an oracle directory (``*.oracle``, ``*.trace.csv``)."""
    app = FastAPI(title="placeoracle", version="1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = OracleRegistry()
    if oracle_dir is not None:
        registry.load_directory(oracle_dir)
    app.state.registry = registry

    @app.exception_handler(KeyError)
    async def _unknown_id(request: Request, exc: KeyError):
        return _error(404, "unknown_id", f"no such oracle or trace: {exc.args[0]}")

    @app.exception_handler(DimensionMismatch)
    async def _dim_mismatch(request: Request, exc: DimensionMismatch):
        return _error(422, "dimension_mismatch", str(exc))

    @app.exception_handler(OracleError)
    async def _bad_input(request: Request, exc: OracleError):
        return _error(400, "validation", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return _error(400, "validation", str(exc))

    @app.exception_handler(Exception)
    async def _internal(request: Request, exc: Exception):
        return _error(500, "internal", f"{type(exc).__name__}: {exc}")

    @app.get("/v1/oracles")
    def list_oracles():
        out = []
        for oracle_id in registry.oracle_ids():
            oracle, _ = registry.oracle(oracle_id)
            out.append(
                {
                    "id": oracle_id,
                    "dims": oracle.n_params + 1,
                    "placements": oracle.n_placements,
                }
            )
        return {"oracles": out}

    @app.get("/v1/oracles/{oracle_id}")
    def oracle_details(oracle_id: str):
        oracle, meta = registry.oracle(oracle_id)
        return {
            "id": oracle_id,
            "clients": list(oracle.clients),
            "placements": oracle.n_placements,
            "dims": oracle.n_params + 1,
            "build_config": meta.get("build_config"),
            "build_report": meta.get("build_report"),
        }

    @app.post("/v1/oracles/{oracle_id}/query")
    def oracle_query(oracle_id: str, body: QueryBody):
        oracle, _ = registry.oracle(oracle_id)
        res = query_minimum(oracle, _workload(oracle, body.w, body.r))
        return {
            "pair": list(res.placement.pair),
            "cost": res.cost,
            "placement_index": res.placement_index,
        }

    @app.post("/v1/oracles/{oracle_id}/drift")
    def oracle_drift(oracle_id: str, body: DriftBody):
        oracle, _ = registry.oracle(oracle_id)
        workload = _workload(oracle, body.w, body.r)
        if body.direction is None:
            res = query_drift_undirected(oracle, workload)
        else:
            if len(body.direction) != oracle.n_params:
                raise DimensionMismatch(f"direction must have {oracle.n_params} entries")
            res = query_drift_directed(
                oracle, workload, np.asarray(body.direction, dtype=np.float64), mode=body.mode
            )
        return _drift_json(oracle, res)

    @app.post("/v1/whatif")
    def whatif(body: WhatIfBody):
        oracle_a, _ = registry.oracle(body.oracle_a)
        oracle_b, _ = registry.oracle(body.oracle_b)
        dims = oracle_a.n_params
        if (body.samples is None) == (body.trace_id is None):
            raise InputError("provide exactly one of samples or trace_id")
        if body.trace_id is not None:
            trace = registry.trace(body.trace_id)
            if trace.ndim != 2 or trace.shape[1] != dims:
                raise DimensionMismatch(f"trace {body.trace_id} rows do not have {dims} entries")
            spec = SampleSpec.from_trace(trace)
        else:
            spec = SampleSpec.synthetic(
                body.samples,
                distribution=body.distribution,
                low=body.low,
                high=body.high,
                seed=body.seed,
            )
        samples = generate_samples(spec, dims)
        summary = simulate_scenario(oracle_a, oracle_b, samples, chunks=body.chunks)
        return {"seed": body.seed, **summary.as_dict()}

    @app.post("/v1/oracles")
    async def build_endpoint(request: Request):
        fields = _parse_multipart(await request.body(), request.headers.get("content-type", ""))
        for required in ("datacenters", "latency"):
            if required not in fields:
                raise InputError(f"multipart field {required!r} is required")
        config = {}
        if "config" in fields and fields["config"].strip():
            try:
                config = json.loads(fields["config"])
            except json.JSONDecodeError as exc:
                raise InputError(f"config field is not valid JSON: {exc}")

        with tempfile.TemporaryDirectory() as tmp:
            dc_path = Path(tmp) / "datacenters.json"
            lat_path = Path(tmp) / "latency.csv"
            dc_path.write_bytes(fields["datacenters"])
            lat_path.write_bytes(fields["latency"])
            catalog = load_datacenters(dc_path)
            if len(catalog.storages) > max_build_datacenters:
                return _error(
                    413,
                    "too_large",
                    f"{len(catalog.storages)} storage data centers exceed the cap of "
                    f"{max_build_datacenters}",
                )
            latency = load_latency_matrix(lat_path, catalog)

        cfg = BuildConfig(
            min_dist_km=float(config.get("min_dist_km", 200.0)),
            prune=bool(config.get("prune", True)),
            parallel_chunks=int(config.get("parallel_chunks", 1)),
        )
        oracle, report = build_oracle(catalog, latency, cfg)
        oracle_id = config.get("oracle_id")
        if not oracle_id:
            digest = hashlib.sha256()
            digest.update(fields["datacenters"])
            digest.update(fields["latency"])
            digest.update(json.dumps(config, sort_keys=True).encode("utf-8"))
            oracle_id = digest.hexdigest()[:12]
        meta = {
            "clients": list(oracle.clients),
            "placements": [list(p.pair) for p in oracle.placements],
            "build_config": {
                "min_dist_km": cfg.min_dist_km,
                "prune": cfg.prune,
                "parallel_chunks": cfg.parallel_chunks,
            },
            "build_report": report.as_dict(),
        }
        registry.add_oracle(str(oracle_id), oracle, meta)
        return {"oracle_id": str(oracle_id), "build_report": report.as_dict()}

    return app
