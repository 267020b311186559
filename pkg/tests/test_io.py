import numpy as np
import pytest

from placeoracle import (
    BuildConfig,
    InputError,
    DimensionMismatch,
    OracleFormatError,
    build_oracle,
    load_datacenters,
    load_latency_matrix,
    load_oracle,
    load_oracle_with_metadata,
    load_trace,
    save_oracle,
)
from placeoracle.io import ORACLE_MAGIC

from conftest import T3_COEFFS, T3_LATENCIES


class TestLoadDatacenters:
    def test_single_entry(self, tmp_path):
        path = tmp_path / "dc.json"
        path.write_text('[{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["storage"]}]')
        catalog = load_datacenters(path)
        assert len(catalog) == 1
        assert catalog.get("d1").roles == frozenset({"storage"})

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "dc.json"
        path.write_text(
            '[{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["storage"]},'
            '{"id":"d1","lat_deg":1,"lon_deg":1,"roles":["storage"]}]'
        )
        with pytest.raises(InputError):
            load_datacenters(path)

    def test_latitude_out_of_range(self, tmp_path):
        path = tmp_path / "dc.json"
        path.write_text('[{"id":"d1","lat_deg":91,"lon_deg":0,"roles":["storage"]}]')
        with pytest.raises(InputError):
            load_datacenters(path)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "dc.json"
        path.write_text("{not json")
        with pytest.raises(InputError):
            load_datacenters(path)

    def test_missing_key(self, tmp_path):
        path = tmp_path / "dc.json"
        path.write_text('[{"id":"d1","lat_deg":0,"roles":["storage"]}]')
        with pytest.raises(InputError):
            load_datacenters(path)


class TestLoadLatencyMatrix:
    def test_t3_fixture(self, t3_files, t3_catalog):
        _, lat_path = t3_files
        latency = load_latency_matrix(lat_path, t3_catalog)
        assert latency.clients == ("c1", "c2")
        assert latency.storages == ("d1", "d2", "d3")
        np.testing.assert_array_equal(latency.values, T3_LATENCIES)

    def test_column_order_is_realigned_to_catalog(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d3,d1,d2\nc1,30,10,20\nc2,10,30,20\n")
        latency = load_latency_matrix(path, t3_catalog)
        assert latency.storages == ("d1", "d2", "d3")
        np.testing.assert_array_equal(latency.values, T3_LATENCIES)

    def test_missing_column(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d1,d2\nc1,10,20\nc2,30,20\n")
        with pytest.raises(InputError):
            load_latency_matrix(path, t3_catalog)

    def test_negative_value(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d1,d2,d3\nc1,10,20,-1\nc2,30,20,10\n")
        with pytest.raises(InputError):
            load_latency_matrix(path, t3_catalog)

    def test_unknown_id(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d1,d2,d9\nc1,10,20,30\nc2,30,20,10\n")
        with pytest.raises(InputError):
            load_latency_matrix(path, t3_catalog)

    def test_ragged_row(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d1,d2,d3\nc1,10,20\nc2,30,20,10\n")
        with pytest.raises(InputError):
            load_latency_matrix(path, t3_catalog)

    def test_missing_client_row(self, tmp_path, t3_catalog):
        path = tmp_path / "lat.csv"
        path.write_text("client_id,d1,d2,d3\nc1,10,20,30\n")
        with pytest.raises(InputError):
            load_latency_matrix(path, t3_catalog)


class TestLoadTrace:
    def test_basic_rows(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("1,0,0,0\n0.5,2,1,0\n")
        trace = load_trace(path, 2)
        np.testing.assert_array_equal(trace, [[1, 0, 0, 0], [0.5, 2, 1, 0]])

    def test_wrong_width(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("1,0,0\n")
        with pytest.raises(DimensionMismatch):
            load_trace(path, 2)

    def test_negative_entry(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("1,0,0,-2\n")
        with pytest.raises(InputError):
            load_trace(path, 2)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("")
        trace = load_trace(path, 2)
        assert trace.shape == (0, 4)


class TestOracleRoundTrip:
    def test_t3_round_trip_bit_identical(self, tmp_path, t3_catalog, t3_latency):
        cfg = BuildConfig(min_dist_km=200.0)
        oracle, report = build_oracle(t3_catalog, t3_latency, cfg)
        path = tmp_path / "t3.oracle"
        save_oracle(oracle, path, build_config=cfg, build_report=report)
        loaded, meta = load_oracle_with_metadata(path)
        np.testing.assert_array_equal(loaded.raw_planes, oracle.raw_planes)
        np.testing.assert_array_equal(loaded.unit_planes, oracle.unit_planes)
        assert loaded.clients == oracle.clients
        assert [p.pair for p in loaded.placements] == [p.pair for p in oracle.placements]
        assert meta["build_config"]["min_dist_km"] == 200.0
        assert meta["build_report"]["retained"] == 3
        assert {p.pair: p.coeffs.tolist() for p in loaded.placements} == T3_COEFFS

    def test_round_trip_of_random_oracle(self, tmp_path):
        from placeoracle import synthetic_topology

        catalog, latency = synthetic_topology(9, 4, seed=55)
        oracle, _ = build_oracle(catalog, latency)
        path = tmp_path / "r.oracle"
        save_oracle(oracle, path)
        loaded = load_oracle(path)
        np.testing.assert_array_equal(loaded.raw_planes, oracle.raw_planes)
        assert [p.pair for p in loaded.placements] == [p.pair for p in oracle.placements]

    def test_double_round_trip_same_bytes(self, tmp_path, t3_oracle):
        p1 = tmp_path / "a.oracle"
        p2 = tmp_path / "b.oracle"
        save_oracle(t3_oracle, p1)
        save_oracle(load_oracle(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_magic(self, tmp_path, t3_oracle):
        path = tmp_path / "bad.oracle"
        save_oracle(t3_oracle, path)
        blob = bytearray(path.read_bytes())
        blob[:8] = b"NOTORCL!"
        path.write_bytes(bytes(blob))
        with pytest.raises(OracleFormatError):
            load_oracle(path)

    def test_version_mismatch(self, tmp_path, t3_oracle):
        path = tmp_path / "v.oracle"
        save_oracle(t3_oracle, path)
        blob = bytearray(path.read_bytes())
        blob[8] = 99
        path.write_bytes(bytes(blob))
        with pytest.raises(OracleFormatError):
            load_oracle(path)

    def test_truncated_matrix(self, tmp_path, t3_oracle):
        path = tmp_path / "t.oracle"
        save_oracle(t3_oracle, path)
        blob = path.read_bytes()
        path.write_bytes(blob[:-9])
        with pytest.raises(OracleFormatError):
            load_oracle(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "h.oracle"
        path.write_bytes(ORACLE_MAGIC + b"\x01")
        with pytest.raises(OracleFormatError):
            load_oracle(path)
