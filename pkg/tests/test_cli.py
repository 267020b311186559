import json

import numpy as np
import pytest

from placeoracle.cli import main


@pytest.fixture
def t3_oracle_file(t3_files, tmp_path):
    dc_path, lat_path = t3_files
    out = tmp_path / "t3.oracle"
    code = main(
        [
            "build",
            "--datacenters", str(dc_path),
            "--latency", str(lat_path),
            "--min-dist-km", "200",
            "-o", str(out),
        ]
    )
    assert code == 0
    return out


def test_build_reports_counts(t3_files, tmp_path, capsys):
    dc_path, lat_path = t3_files
    out = tmp_path / "t3.oracle"
    code = main(["build", "--datacenters", str(dc_path), "--latency", str(lat_path), "-o", str(out)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == "v1"
    assert (payload["candidates"], payload["pruned"], payload["retained"]) == (3, 0, 3)
    assert out.exists()


def test_query_json_output(t3_oracle_file, capsys):
    code = main(["query", "--oracle", str(t3_oracle_file), "--w", "1,0", "--r", "0,0", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"schema": "v1", "pair": ["d1", "d2"], "cost": 20.0, "placement_index": 0}


def test_query_workload_file(t3_oracle_file, tmp_path, capsys):
    wl = tmp_path / "wl.csv"
    wl.write_text("0,0,1,1\n")
    code = main(["query", "--oracle", str(t3_oracle_file), "--workload", str(wl), "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pair"] == ["d1", "d3"]
    assert payload["cost"] == 20.0


def test_stdout_byte_identical_across_runs(t3_oracle_file, capsys):
    args = ["query", "--oracle", str(t3_oracle_file), "--w", "1,0", "--r", "0,0", "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second


def test_drift_undirected_json(t3_oracle_file, tmp_path, capsys):
    wl = tmp_path / "wl.csv"
    wl.write_text("1,0,0,0\n")
    code = main(["drift", "--oracle", str(t3_oracle_file), "--workload", str(wl), "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == "v1"
    assert payload["unbounded"] in (True, False)
    if not payload["unbounded"]:
        assert len(payload["param_next"]) == 4
        assert payload["distance"] >= 0


def test_drift_directed_modes(t3_oracle_file, tmp_path, capsys):
    wl = tmp_path / "wl.csv"
    wl.write_text("1,0,0,0\n")
    d = tmp_path / "d.csv"
    d.write_text("0,1,0,0\n")
    for mode in ("lifted", "projected"):
        code = main(
            ["drift", "--oracle", str(t3_oracle_file), "--workload", str(wl),
             "--direction", str(d), "--mode", mode, "--json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["mode"] == mode


def test_simulate_identical_oracles(t3_oracle_file, capsys):
    code = main(
        ["simulate", "--oracle-a", str(t3_oracle_file), "--oracle-b", str(t3_oracle_file),
         "--samples", "50", "--seed", "7", "--dist", "uniform:0.1:1", "--json"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mean_improvement"] == 1.0
    assert payload["ci95"] == [1.0, 1.0]
    assert payload["samples_used"] == 50


def test_simulate_trace(t3_oracle_file, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    trace.write_text("1,0,0,0\n0,0,1,1\n")
    code = main(
        ["simulate", "--oracle-a", str(t3_oracle_file), "--oracle-b", str(t3_oracle_file),
         "--trace", str(trace), "--json"]
    )
    assert code == 0
    assert json.loads(capsys.readouterr().out)["samples_used"] == 2


def test_single_storage_build_fails_with_code_1(tmp_path, capsys):
    dc = tmp_path / "dc.json"
    dc.write_text(
        '[{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["storage"]},'
        '{"id":"c1","lat_deg":10,"lon_deg":0,"roles":["client"]}]'
    )
    lat = tmp_path / "lat.csv"
    lat.write_text("client_id,d1\nc1,10\n")
    code = main(["build", "--datacenters", str(dc), "--latency", str(lat), "-o", str(tmp_path / "x.oracle")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_unknown_flag_rejected(t3_oracle_file, capsys):
    code = main(["query", "--oracle", str(t3_oracle_file), "--w", "1,0", "--r", "0,0", "--frobnicate"])
    assert code == 1


def test_unknown_subcommand_rejected(capsys):
    assert main(["transmogrify"]) == 1


def test_missing_oracle_file_is_input_error(tmp_path, capsys):
    code = main(["query", "--oracle", str(tmp_path / "nope.oracle"), "--w", "1", "--r", "0", "--json"])
    assert code == 1


def test_oracle_threads_env_sets_default_chunks(t3_files, tmp_path, monkeypatch, capsys):
    dc_path, lat_path = t3_files
    out = tmp_path / "env.oracle"
    monkeypatch.setenv("ORACLE_THREADS", "3")
    code = main(["build", "--datacenters", str(dc_path), "--latency", str(lat_path), "-o", str(out)])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["retained"] == 3

    monkeypatch.setenv("ORACLE_THREADS", "zero")
    code = main(["build", "--datacenters", str(dc_path), "--latency", str(lat_path), "-o", str(out)])
    assert code == 1


def test_bench_build_csv(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", "--suite", "build", "--sizes", "6,12", "--clients", "4", "--csv", str(out), "--no-prune"]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "suite,size,metric,value"
    rows = [line.split(",") for line in lines[1:]]
    candidates = {int(r[1]): float(r[3]) for r in rows if r[2] == "candidates_enumerated"}
    assert candidates == {6: 15, 12: 66}


def test_bench_quadratic_growth_in_storage_count(tmp_path):
    # enumeration work is ~ |D|^2 * |C|: fit the log-log slope over a spread
    # of sizes and require 2.0 +- 0.3
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", "--suite", "build", "--sizes", "25,50,100,200", "--clients", "100",
         "--csv", str(out), "--no-prune"]
    )
    assert code == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    times = {int(r[1]): float(r[3]) for r in rows if r[2] == "enumerate_seconds"}
    sizes = sorted(times)
    slope = np.polyfit(np.log([s for s in sizes]), np.log([times[s] for s in sizes]), 1)[0]
    assert 1.7 <= slope <= 2.3, f"enumeration slope {slope:.2f} outside 2.0 +- 0.3"
