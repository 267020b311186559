import numpy as np
import pytest

from placeoracle import (
    Catalog,
    DataCenter,
    LatencyMatrix,
    Placement,
    Workload,
    build_oracle,
    build_plane_matrix,
)

# Reference instance used throughout: clients c1,c2; storages d1,d2,d3 mutually
# well past 200 km apart; latencies chosen so each pair's coefficient vector is
# incomparable with the others.
T3_LATENCIES = np.array([[10.0, 20.0, 30.0], [30.0, 20.0, 10.0]])

T3_COEFFS = {
    ("d1", "d2"): [20.0, 30.0, 10.0, 20.0],
    ("d1", "d3"): [30.0, 30.0, 10.0, 10.0],
    ("d2", "d3"): [30.0, 20.0, 20.0, 10.0],
}


def t3_datacenters():
    return [
        DataCenter("d1", 0.0, 0.0, frozenset({"storage"})),
        DataCenter("d2", 0.0, 10.0, frozenset({"storage"})),
        DataCenter("d3", 10.0, 0.0, frozenset({"storage"})),
        DataCenter("c1", 20.0, 0.0, frozenset({"client"})),
        DataCenter("c2", -20.0, 0.0, frozenset({"client"})),
    ]


@pytest.fixture
def t3_catalog():
    return Catalog(t3_datacenters())


@pytest.fixture
def t3_latency(t3_catalog):
    return LatencyMatrix(clients=("c1", "c2"), storages=("d1", "d2", "d3"), values=T3_LATENCIES)


@pytest.fixture
def t3_oracle(t3_catalog, t3_latency):
    oracle, _ = build_oracle(t3_catalog, t3_latency)
    return oracle


@pytest.fixture
def toy_oracle():
    """The two-plane drift instance: rows [1,3] and [3,1] on the write axes.

    Zero read coefficients keep the Placement invariant intact while leaving
    every dot product of the 2-D toy unchanged.
    """
    return build_plane_matrix(
        [
            Placement(("d1", "d2"), np.array([1.0, 3.0, 0.0, 0.0])),
            Placement(("d3", "d4"), np.array([3.0, 1.0, 0.0, 0.0])),
        ],
        ("c1", "c2"),
    )


def workload(w, r):
    return Workload(w=np.asarray(w, dtype=float), r=np.asarray(r, dtype=float))


@pytest.fixture
def t3_files(tmp_path):
    """T3 written out as the catalog/latency fixture files the loaders expect."""
    import json

    dc_path = tmp_path / "datacenters.json"
    dc_path.write_text(
        json.dumps(
            [
                {"id": "d1", "lat_deg": 0.0, "lon_deg": 0.0, "roles": ["storage"]},
                {"id": "d2", "lat_deg": 0.0, "lon_deg": 10.0, "roles": ["storage"]},
                {"id": "d3", "lat_deg": 10.0, "lon_deg": 0.0, "roles": ["storage"]},
                {"id": "c1", "lat_deg": 20.0, "lon_deg": 0.0, "roles": ["client"]},
                {"id": "c2", "lat_deg": -20.0, "lon_deg": 0.0, "roles": ["client"]},
            ]
        )
    )
    lat_path = tmp_path / "latency.csv"
    lat_path.write_text(
        "client_id,d1,d2,d3\n"
        "c1,10,20,30\n"
        "c2,30,20,10\n"
    )
    return dc_path, lat_path
