import hashlib
import json

import pytest

from solimag.runner import (
    DIAGNOSTICS_COLUMNS,
    ScenarioValidationError,
    convergence_study,
    run_portrait,
    run_scenario,
)
from solimag.scenarios import parse_scenario
from solimag.snapshots import read_snapshot

@pytest.fixture(scope="module")
def tiny_summary(tmp_path_factory, tiny_scenario_text):
    out = tmp_path_factory.mktemp("tiny_run")
    cfg = parse_scenario(tiny_scenario_text)
    return out, run_scenario(cfg, output_dir=out)


def test_artifacts_exist_and_hashes_match(tiny_summary):
    out, summary = tiny_summary
    for rel, digest in summary["files"].items():
        data = (out / rel).read_bytes()
        assert hashlib.sha256(data).hexdigest() == digest
    names = set(summary["files"])
    assert {"eps_0.2/trajectory.csv", "eps_0.2/diagnostics.csv",
            "eps_0.2/diagnostics.jsonl", "eps_0.2/snapshot_00000.bin"} <= names
    assert (out / "summary.json").exists()


def test_diagnostics_csv_header(tiny_summary):
    out, _ = tiny_summary
    header = (out / "eps_0.2" / "diagnostics.csv").read_text().splitlines()[0]
    assert header.split(",") == DIAGNOSTICS_COLUMNS(1)


def test_snapshots_readable_and_final_time(tiny_summary):
    out, summary = tiny_summary
    snaps = sorted((out / "eps_0.2").glob("snapshot_*.bin"))
    fields = [read_snapshot(p) for p in snaps]
    assert fields[0].t == 0.0
    assert abs(fields[-1].t - 0.05) <= 1e-12
    assert all(f.eps == 0.2 for f in fields)


def test_summary_reports_conservation(tiny_summary):
    _, summary = tiny_summary
    per = summary["per_eps"]["0.2"]
    assert per["mass_drift_rel"] <= 1e-10
    assert per["max_defect"] <= 1e-3


def test_reruns_are_byte_identical(tmp_path, tiny_scenario_text):
    cfg = parse_scenario(tiny_scenario_text)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    sum_a = run_scenario(cfg, output_dir=out_a)
    sum_b = run_scenario(cfg, output_dir=out_b)
    assert sum_a["files"] == sum_b["files"]
    for rel in sum_a["files"]:
        assert (out_a / rel).read_bytes() == (out_b / rel).read_bytes()


def test_validation_failure_raises_with_names(tmp_path, tiny_scenario_text):
    cfg = parse_scenario(tiny_scenario_text.replace("points = 256", "points = 257"))
    with pytest.raises(ScenarioValidationError, match="power of two"):
        run_scenario(cfg, output_dir=tmp_path)


def test_study_needs_three_eps(tmp_path, tiny_scenario_text):
    cfg = parse_scenario(tiny_scenario_text)
    with pytest.raises(ScenarioValidationError, match=">= 3 eps"):
        convergence_study(cfg, output_dir=tmp_path)


def test_portrait_outputs(tmp_path, portrait_scenario_text):
    cfg = parse_scenario(portrait_scenario_text)
    summary = run_portrait(cfg, output_dir=tmp_path)
    assert summary["diameter_monotone_decreasing"] is True
    diam = [summary["portraits"][k]["transverse_turn_diameter"] for k in ("0", "5", "20")]
    assert diam[0] > diam[1] > diam[2]
    for b in (0, 5, 20):
        assert (tmp_path / f"trajectory_b{b}.csv").exists()
    assert (tmp_path / "portrait_summary.json").exists()


def test_portrait_requires_b_values(tmp_path, portrait_scenario_text):
    cfg = parse_scenario(portrait_scenario_text.replace("b_values = 0, 5, 20\n", ""))
    with pytest.raises(ScenarioValidationError, match="b_values"):
        run_portrait(cfg, output_dir=tmp_path)


def test_study_persists_partial_results_on_failure(tmp_path, tiny_scenario_text):
    # an unreachable solver tolerance on a fine grid fails the first leg;
    # the partial summary must land on disk before the error propagates
    from solimag.propagator import SolverError

    text = (
        tiny_scenario_text
        .replace("eps = 0.2", "eps = 0.2, 0.1, 0.05")
        .replace("solver_tol = 1e-10", "solver_tol = 1e-16")
        .replace("electric = zero", "electric = harmonic\nomega = 1.0")
        .replace("points = 256", "points = 4096")
    )
    cfg = parse_scenario(text)
    with pytest.raises(SolverError):
        convergence_study(cfg, output_dir=tmp_path)
    partial = json.loads((tmp_path / "summary_partial.json").read_text())
    assert partial["scenario"] == "tiny"
    assert "stalled" in partial["error"]
