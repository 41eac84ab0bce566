import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from solimag.service import app



@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_scenarios_listing(client):
    body = client.get("/scenarios").json()
    assert "magnetic_2d" in body["scenarios"]


def test_groundstate_endpoint(client):
    resp = client.post("/groundstate", json={
        "p": 1.0, "dim": 1, "half_width": 16.0, "points": 1024, "tol": 1e-10,
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["mass"] == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-6)
    assert body["peak"] == pytest.approx(np.sqrt(2.0), abs=1e-6)
    assert body["radial_values"] is None


def test_groundstate_validation_error(client):
    resp = client.post("/groundstate", json={"p": 5.0, "dim": 1})
    assert resp.status_code == 422
    assert resp.json()["detail"]["kind"] == "validation"


def test_trajectory_endpoint(client):
    resp = client.post("/trajectory", json={
        "dim": 3,
        "potential": {"electric": "harmonic", "omega": [1.0, 1.4, 1.2],
                      "magnetic": "constant_b", "b": 5.0},
        "x0": [1.0, 0.5, 0.8],
        "xi0": [0.5, -0.3, 0.4],
        "T": 1.0,
        "dt": 1e-3,
        "stride": 100,
    })
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["t"]) == 11
    assert body["hamiltonian_drift"] <= 1e-8


def test_scenario_validate_endpoint(client, tiny_scenario_text):
    ok = client.post("/scenario/validate", json={"config_text": tiny_scenario_text}).json()
    assert ok["summary"]["valid"] is True
    bad = client.post("/scenario/validate", json={
        "config_text": tiny_scenario_text.replace("points = 256", "points = 257")
    }).json()
    assert bad["summary"]["valid"] is False
    assert any("power of two" in p for p in bad["summary"]["problems"])


def test_scenario_run_and_inspect(client, tmp_path, tiny_scenario_text):
    resp = client.post("/scenario/run", json={
        "config_text": tiny_scenario_text, "output_dir": str(tmp_path)
    })
    assert resp.status_code == 200
    summary = resp.json()["summary"]
    assert summary["per_eps"]["0.2"]["mass_drift_rel"] <= 1e-10
    snap = tmp_path / "eps_0.2" / "snapshot_00000.bin"
    body = client.post("/snapshot/inspect", json={"path": str(snap)}).json()
    assert body["dim"] == 1 and body["points"] == 256
    assert body["mass"] == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-6)


def test_scenario_run_parse_error(client):
    resp = client.post("/scenario/run", json={"config_text": "not a config"})
    assert resp.status_code == 422
    assert resp.json()["detail"]["kind"] == "validation"


def test_request_needs_exactly_one_source(client):
    resp = client.post("/scenario/run", json={})
    assert resp.status_code == 422


def test_unknown_builtin_rejected(client):
    resp = client.post("/scenario/run", json={"builtin": "nope"})
    assert resp.status_code == 422


def test_solver_failure_maps_to_500(client, tmp_path, tiny_scenario_text):
    text = (
        tiny_scenario_text
        .replace("solver_tol = 1e-10", "solver_tol = 1e-16")
        .replace("electric = zero", "electric = harmonic\nomega = 1.0")
        .replace("points = 256", "points = 4096")
    )
    resp = client.post("/scenario/run", json={
        "config_text": text, "output_dir": str(tmp_path)
    })
    assert resp.status_code == 500
    assert resp.json()["detail"]["kind"] == "solver"


def test_inspect_missing_file(client, tmp_path):
    resp = client.post("/snapshot/inspect", json={"path": str(tmp_path / "no.bin")})
    assert resp.status_code == 422
