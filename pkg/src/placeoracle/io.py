"""File formats: catalog JSON, latency/trace CSV, and binary oracle files.

Oracle files are self-describing: an 8-byte magic, a format version, a
JSON metadata blob (client ids, placement pairs, build settings), then the
raw plane matrix as row-major little-endian float64.  Unit planes are
recomputed on load rather than stored.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .builder import build_plane_matrix
from .errors import DimensionMismatch, InputError, OracleFormatError
from .model import Catalog, DataCenter, LatencyMatrix, Oracle, Placement

ORACLE_MAGIC = b"CLDORCL1"
ORACLE_FORMAT_VERSION = 1


def load_datacenters(path) -> Catalog:
    """Parse a JSON array of {id, lat_deg, lon_deg, roles} into a catalog."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise InputError(f"{path}: expected a JSON array of data centers")
    dcs = []
    for k, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise InputError(f"{path}: entry {k} is not an object")
        missing = {"id", "lat_deg", "lon_deg", "roles"} - entry.keys()
        if missing:
            raise InputError(f"{path}: entry {k} missing keys {sorted(missing)}")
        dcs.append(
            DataCenter(
                id=str(entry["id"]),
                lat_deg=float(entry["lat_deg"]),
                lon_deg=float(entry["lon_deg"]),
                roles=frozenset(entry["roles"]),
            )
        )
    return Catalog(dcs)


def load_latency_matrix(path, catalog: Catalog) -> LatencyMatrix:
    """Parse a latency CSV and align it to the catalog's client/storage order.

    The header is ``client_id`` followed by storage ids; each row is a
    client id followed by millisecond values.  Every catalog client and
    storage must be covered, and no unknown ids are allowed.
    """
    client_ids = [dc.id for dc in catalog.clients]
    storage_ids = [dc.id for dc in catalog.storages]

    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty latency file")
    header = [cell.strip() for cell in rows[0]]
    if not header or header[0] != "client_id":
        raise InputError(f"{path}: header must start with 'client_id'")
    csv_storages = header[1:]
    unknown = [s for s in csv_storages if s not in storage_ids]
    if unknown:
        raise InputError(f"{path}: unknown storage ids {unknown}")
    if len(set(csv_storages)) != len(csv_storages):
        raise InputError(f"{path}: duplicate storage columns")
    missing = [s for s in storage_ids if s not in csv_storages]
    if missing:
        raise InputError(f"{path}: missing storage columns {missing}")

    by_client: dict[str, list[float]] = {}
    for k, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        cid = row[0].strip()
        if cid not in client_ids:
            raise InputError(f"{path}: line {k}: unknown client id {cid!r}")
        if cid in by_client:
            raise InputError(f"{path}: line {k}: duplicate client row {cid!r}")
        if len(row) != len(csv_storages) + 1:
            raise InputError(f"{path}: line {k}: expected {len(csv_storages) + 1} cells, got {len(row)}")
        try:
            vals = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise InputError(f"{path}: line {k}: non-numeric latency") from exc
        if any(v < 0 for v in vals):
            raise InputError(f"{path}: line {k}: negative latency")
        by_client[cid] = vals
    missing_clients = [c for c in client_ids if c not in by_client]
    if missing_clients:
        raise InputError(f"{path}: missing client rows {missing_clients}")

    col_of = {s: i for i, s in enumerate(csv_storages)}
    values = np.array(
        [[by_client[c][col_of[s]] for s in storage_ids] for c in client_ids], dtype=np.float64
    )
    return LatencyMatrix(clients=tuple(client_ids), storages=tuple(storage_ids), values=values)


def load_trace(path, n_clients: int) -> np.ndarray:
    """Parse a headerless CSV of workload rows (w then r, 2|C| values each)."""
    dims = 2 * n_clients
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        for k, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) != dims:
                raise DimensionMismatch(f"{path}: line {k}: expected {dims} values, got {len(row)}")
            try:
                vals = [float(cell) for cell in row]
            except ValueError as exc:
                raise InputError(f"{path}: line {k}: non-numeric entry") from exc
            if any(v < 0 for v in vals):
                raise InputError(f"{path}: line {k}: negative entry")
            samples.append(vals)
    return np.array(samples, dtype=np.float64).reshape(len(samples), dims)


def _oracle_metadata(oracle: Oracle, build_config=None, build_report=None) -> dict:
    meta = {
        "clients": list(oracle.clients),
        "placements": [list(p.pair) for p in oracle.placements],
        "build_config": None,
        "build_report": None,
    }
    if build_config is not None:
        meta["build_config"] = {
            "min_dist_km": build_config.min_dist_km,
            "prune": build_config.prune,
            "parallel_chunks": build_config.parallel_chunks,
        }
    if build_report is not None:
        meta["build_report"] = build_report.as_dict()
    return meta


def save_oracle(oracle: Oracle, path, build_config=None, build_report=None) -> None:
    """Write an oracle file; raw planes round-trip bit-exactly."""
    meta = json.dumps(_oracle_metadata(oracle, build_config, build_report)).encode("utf-8")
    planes = np.ascontiguousarray(oracle.raw_planes, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(ORACLE_MAGIC)
        fh.write(struct.pack("<I", ORACLE_FORMAT_VERSION))
        fh.write(struct.pack("<I", len(meta)))
        fh.write(meta)
        fh.write(struct.pack("<II", planes.shape[0], planes.shape[1]))
        fh.write(planes.tobytes(order="C"))


def load_oracle_with_metadata(path) -> tuple[Oracle, dict]:
    """Load an oracle file, returning the oracle and its embedded metadata."""
    blob = Path(path).read_bytes()
    if len(blob) < len(ORACLE_MAGIC) + 8:
        raise OracleFormatError(f"{path}: file too short")
    if blob[: len(ORACLE_MAGIC)] != ORACLE_MAGIC:
        raise OracleFormatError(f"{path}: bad magic, not an oracle file")
    off = len(ORACLE_MAGIC)
    (version,) = struct.unpack_from("<I", blob, off)
    off += 4
    if version != ORACLE_FORMAT_VERSION:
        raise OracleFormatError(
            f"{path}: format version {version}, expected {ORACLE_FORMAT_VERSION}"
        )
    (meta_len,) = struct.unpack_from("<I", blob, off)
    off += 4
    if len(blob) < off + meta_len + 8:
        raise OracleFormatError(f"{path}: truncated metadata section")
    try:
        meta = json.loads(blob[off : off + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise OracleFormatError(f"{path}: corrupt metadata: {exc}") from exc
    off += meta_len
    n_rows, n_cols = struct.unpack_from("<II", blob, off)
    off += 8
    expected = n_rows * n_cols * 8
    if len(blob) - off != expected:
        raise OracleFormatError(
            f"{path}: truncated matrix section: expected {expected} bytes, found {len(blob) - off}"
        )
    planes = np.frombuffer(blob, dtype="<f8", count=n_rows * n_cols, offset=off)
    planes = planes.reshape(n_rows, n_cols).astype(np.float64, copy=True)
    if n_cols < 2 or not np.all(planes[:, -1] == -1.0):
        raise OracleFormatError(f"{path}: corrupt plane matrix: trailing column must be -1")

    clients = meta.get("clients")
    pairs = meta.get("placements")
    if not isinstance(clients, list) or not isinstance(pairs, list) or len(pairs) != n_rows:
        raise OracleFormatError(f"{path}: metadata does not match matrix dimensions")
    if n_cols != 2 * len(clients) + 1:
        raise OracleFormatError(
            f"{path}: plane width {n_cols} does not match {len(clients)} clients"
        )
    placements = [Placement(tuple(pair), planes[k, :-1]) for k, pair in enumerate(pairs)]
    oracle = build_plane_matrix(placements, clients)
    return oracle, meta


def load_oracle(path) -> Oracle:
    """Load an oracle file; unit planes are recomputed, never stored."""
    oracle, _ = load_oracle_with_metadata(path)
    return oracle
