"""Experiment orchestration: scenario runs, eps-sweep studies, portraits.

A run computes the ground state (cached by its (p, grid) key), integrates the
driving trajectory at the PDE step for exact time alignment, evolves the wave
per eps, and streams diagnostics to CSV and JSON-lines.  Outputs are
deterministic: fixed float formatting, sorted JSON keys, no wall clock except
the isolated metadata block of the summary.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .classical import integrate_trajectory, trajectory_to_csv, transverse_turn_diameter
from .diagnostics import (
    CutoffSpec,
    basic_record,
    concentration_center,
    continuity_residual,
    ehrenfest_residual,
    fit_ansatz,
    moment_surrogates,
    moving_frame_energy,
    scalar_test_family,
)
from .grid import make_grid
from .groundstate import solve_ground_state
from .propagator import evolve, initial_datum
from .scenarios import ScenarioConfig, ScenarioError, validate_scenario
from .snapshots import write_snapshot

__all__ = [
    "ScenarioValidationError",
    "run_scenario",
    "convergence_study",
    "run_portrait",
    "DIAGNOSTICS_COLUMNS",
]

log = logging.getLogger(__name__)


class ScenarioValidationError(ScenarioError):
    """One or more scenario invariants failed; message names them."""


_GROUND_STATES: dict = {}


def _ground_state(cfg: ScenarioConfig):
    key = (cfg.p, cfg.dim, cfg.gs_half_width, cfg.gs_points, cfg.gs_tol)
    if key not in _GROUND_STATES:
        grid = make_grid(cfg.dim, cfg.gs_half_width, cfg.gs_points)
        log.info("solving ground state p=%g on %s", cfg.p, grid.shape)
        _GROUND_STATES[key] = solve_ground_state(
            cfg.p, grid, tol=cfg.gs_tol, max_iter=cfg.gs_max_iter
        )
    return _GROUND_STATES[key]


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return f"{float(value):.17g}"


def _diagnostics_columns(dim: int) -> list:
    cols = ["t", "mass", "energy"]
    cols += [f"momentum{j+1}" for j in range(dim)]
    cols += ["kinetic"]
    cols += [f"center{j+1}" for j in range(dim)]
    cols += [f"y_fit{j+1}" for j in range(dim)]
    cols += ["theta_fit", "defect", "defect_flagged", "frame_energy",
             "frame_energy_gap", "omega_hat", "pi1_abs", "pi2_sup", "gamma_abs",
             "rho_a", "continuity"]
    cols += [f"ehrenfest{j+1}" for j in range(dim)]
    return cols


DIAGNOSTICS_COLUMNS = _diagnostics_columns  # documented column order per dim


def _record_row(rec, dim: int) -> list:
    row = [rec.t, rec.mass, rec.energy]
    row += [rec.momentum[j] for j in range(dim)]
    row += [rec.kinetic]
    for vec in (rec.center, rec.y_fit):
        row += [None if vec is None else vec[j] for j in range(dim)]
    row += [rec.theta_fit, rec.defect, rec.defect_flagged, rec.frame_energy,
            rec.frame_energy_gap, rec.omega_hat, rec.pi1_abs, rec.pi2_sup,
            rec.gamma_abs, rec.rho_a, rec.continuity]
    row += [None if rec.ehrenfest is None else rec.ehrenfest[j] for j in range(dim)]
    return row


def _write_diagnostics(records, dim: int, csv_path: Path, jsonl_path: Path) -> None:
    cols = _diagnostics_columns(dim)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for rec in records:
            writer.writerow([_fmt(v) for v in _record_row(rec, dim)])
    with open(jsonl_path, "w") as fh:
        for rec in records:
            obj = dict(zip(cols, (None if v is None else float(v) if not isinstance(v, (bool, np.bool_)) else bool(v) for v in _record_row(rec, dim))))
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _loglog_slope(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(ys <= 0):
        return float("nan")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _decimated_trajectory_csv(traj, path: Path, max_rows: int = 20001) -> None:
    stride = max(1, int(np.ceil(len(traj.times) / max_rows)))
    if stride == 1:
        trajectory_to_csv(traj, path)
        return
    from dataclasses import replace

    thinned = replace(
        traj,
        times=traj.times[::stride],
        positions=traj.positions[::stride],
        velocities=traj.velocities[::stride],
        hamiltonians=traj.hamiltonians[::stride],
    )
    trajectory_to_csv(thinned, path)


def run_scenario(cfg: ScenarioConfig, output_dir=None, with_fit: bool = True) -> dict:
    """Execute a scenario, write its artifact files, return the summary dict."""
    problems = validate_scenario(cfg)
    if problems:
        raise ScenarioValidationError("; ".join(problems))

    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    gs = _ground_state(cfg)
    pot = cfg.potential(validate=True)
    grid = make_grid(cfg.dim, cfg.grid_half_width, cfg.grid_points)
    files: list = []
    per_eps: dict = {}

    for eps in cfg.eps:
        eps_dir = out / f"eps_{eps:g}"
        eps_dir.mkdir(parents=True, exist_ok=True)
        dt = cfg.dt_for(eps)
        if cfg.T > 0:
            # the integrators land exactly on T by nudging dt to T/n
            dt = cfg.T / max(1, int(round(cfg.T / dt)))
        traj = integrate_trajectory(cfg.x0, cfg.xi0, pot, cfg.T, dt)
        traj_path = eps_dir / "trajectory.csv"
        _decimated_trajectory_csv(traj, traj_path)
        files.append(traj_path)

        log.info("evolving %s at eps=%g (dt=%g, %d steps)",
                 cfg.name, eps, dt, int(round(cfg.T / dt)))
        field0 = initial_datum(gs, cfg.x0, cfg.xi0, pot, eps, grid)
        snaps = [s for s, _ in evolve(
            field0, cfg.T, dt, pot, cfg.observer_cadence, cfg.solver_tol,
            boundary_guard=cfg.boundary_guard,
        )]
        cutoff = CutoffSpec.for_trajectory(traj, margin=2.0)
        tests = scalar_test_family(grid, pot)

        records = []
        for snap in snaps:
            k = int(round(snap.t / dt))
            state = traj.state(k)
            rec = basic_record(snap, pot)
            rec.center = concentration_center(snap, cutoff, normalize=True)
            if with_fit:
                fit = fit_ansatz(snap, state, gs, pot)
                rec.y_fit, rec.theta_fit = fit.y, fit.theta
                rec.defect, rec.defect_flagged = fit.defect, fit.flagged
            surro = moment_surrogates(snap, state, pot, cutoff, tests=tests)
            rec.omega_hat = surro.omega_hat
            rec.pi1_abs, rec.pi2_sup = surro.pi1_abs, surro.pi2_sup
            rec.gamma_abs, rec.rho_a = surro.gamma_abs, surro.rho_a
            frame = moving_frame_energy(snap, state, pot)
            rec.frame_energy, rec.frame_energy_gap = frame.energy, frame.discrepancy
            records.append(rec)
        for i in range(1, len(snaps) - 1):
            records[i].continuity = continuity_residual(
                snaps[i - 1], snaps[i + 1], pot
            )
            records[i].ehrenfest = ehrenfest_residual(
                snaps[i - 1], snaps[i], snaps[i + 1], pot
            )

        csv_path = eps_dir / "diagnostics.csv"
        jsonl_path = eps_dir / "diagnostics.jsonl"
        _write_diagnostics(records, cfg.dim, csv_path, jsonl_path)
        files += [csv_path, jsonl_path]

        snap_indices = {0, len(snaps) - 1}
        if cfg.snapshot_cadence > 0:
            snap_indices.update(range(0, len(snaps), cfg.snapshot_cadence))
        for i in sorted(snap_indices):
            snap_path = eps_dir / f"snapshot_{i:05d}.bin"
            write_snapshot(snaps[i], snap_path)
            files.append(snap_path)

        masses = np.array([r.mass for r in records])
        energies = np.array([r.energy for r in records])
        defects = [r.defect for r in records if r.defect is not None]
        rec0 = records[0]
        per_eps[f"{eps:g}"] = {
            "eps": eps,
            "dt": dt,
            "steps": int(round(cfg.T / dt)),
            "mass0": float(masses[0]),
            "mass_drift_rel": float(np.max(np.abs(masses - masses[0])) / masses[0]),
            "energy0": float(energies[0]),
            "energy_drift_rel": float(
                np.max(np.abs(energies - energies[0])) / max(abs(energies[0]), 1e-300)
            ),
            "max_defect": float(np.max(defects)) if defects else None,
            "energy_expansion_gap0": float(
                energies[0] - gs.energy - gs.mass * traj.hamiltonians[0]
            ),
            "omega_hat0": float(rec0.omega_hat),
            "gamma_abs0": float(rec0.gamma_abs),
            "center_mismatch_max": float(
                np.max(
                    [
                        np.linalg.norm(r.center - traj.state(int(round(r.t / dt))).x)
                        for r in records
                    ]
                )
            ),
        }

    summary = {
        "scenario": {
            "name": cfg.name,
            "dim": cfg.dim,
            "p": cfg.p,
            "eps": list(cfg.eps),
            "T": cfg.T,
            "grid": {"half_width": cfg.grid_half_width, "points": cfg.grid_points},
            "potential": {
                "electric": cfg.electric,
                "omega": list(cfg.omega),
                "magnetic": cfg.magnetic,
                "b": cfg.b,
            },
            "x0": list(cfg.x0),
            "xi0": list(cfg.xi0),
        },
        "ground_state": {
            "mass": gs.mass,
            "energy": gs.energy,
            "decay_rate": gs.decay_rate,
            "residual": gs.residual,
        },
        "per_eps": per_eps,
    }
    if len(cfg.eps) >= 3:
        eps_sorted = sorted(cfg.eps, reverse=True)
        keys = [f"{e:g}" for e in eps_sorted]
        summary["slopes"] = {
            "defect": _loglog_slope(
                eps_sorted, [per_eps[k]["max_defect"] for k in keys]
            ),
            "energy_expansion_t0": _loglog_slope(
                eps_sorted, [abs(per_eps[k]["energy_expansion_gap0"]) for k in keys]
            ),
            "omega_hat_t0": _loglog_slope(
                eps_sorted, [per_eps[k]["omega_hat0"] for k in keys]
            ),
            "gamma_t0": _loglog_slope(
                eps_sorted, [per_eps[k]["gamma_abs0"] for k in keys]
            ),
        }

    summary["files"] = {
        str(path.relative_to(out)): _sha256(path) for path in files
    }
    summary["metadata"] = {
        "created_at": datetime.now(timezone.utc).isoformat(),
        "package": "solimag",
    }
    summary_path = out / "summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return summary


def convergence_study(cfg: ScenarioConfig, output_dir=None) -> dict:
    """Eps-sweep convergence study; needs at least three eps values.

    Writes the per-eps table as study.csv next to the usual artifacts.  If a
    run fails midway the partial summary is persisted before the error
    propagates.
    """
    if len(cfg.eps) < 3:
        raise ScenarioValidationError(
            f"convergence study needs >= 3 eps values, got {len(cfg.eps)}"
        )
    out = Path(output_dir or cfg.output_dir)
    try:
        summary = run_scenario(cfg, output_dir=out)
    except ScenarioValidationError:
        raise
    except Exception as err:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "summary_partial.json", "w") as fh:
            json.dump(
                {"error": str(err), "scenario": cfg.name}, fh, sort_keys=True, indent=2
            )
        raise

    cols = [
        "eps",
        "max_defect",
        "energy_expansion_gap0",
        "omega_hat0",
        "gamma_abs0",
        "mass_drift_rel",
        "energy_drift_rel",
    ]
    study_path = out / "study.csv"
    with open(study_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for eps in sorted(cfg.eps, reverse=True):
            row = per = summary["per_eps"][f"{eps:g}"]
            writer.writerow([_fmt(per[c]) for c in cols])
    summary["files"][str(study_path.relative_to(out))] = _sha256(study_path)
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return summary


def run_portrait(cfg: ScenarioConfig, output_dir=None) -> dict:
    """Integrate the phase portraits of the linear benchmark for each b.

    Emits one trajectory CSV per field strength plus a summary with the
    per-turn transverse diameters and Hamiltonian drifts.
    """
    if cfg.dim != 3:
        raise ScenarioValidationError("portrait scenarios must have dim = 3")
    if not cfg.portrait_b:
        raise ScenarioValidationError("portrait scenario needs [portrait] b_values")
    if cfg.electric != "harmonic":
        raise ScenarioValidationError("portrait scenarios need the harmonic potential")
    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    table = {}
    for b in cfg.portrait_b:
        from .potentials import make_potential

        pot = make_potential(
            3,
            electric="harmonic",
            magnetic="constant_b" if b != 0 else "zero",
            omega=cfg.omega,
            b=b,
            domain_half_width=cfg.grid_half_width,
        )
        traj = integrate_trajectory(
            cfg.x0, cfg.xi0, pot, cfg.portrait_T, cfg.portrait_dt
        )
        path = out / f"trajectory_b{b:g}.csv"
        _decimated_trajectory_csv(traj, path)
        files.append(path)
        table[f"{b:g}"] = {
            "b": b,
            "transverse_turn_diameter": transverse_turn_diameter(traj),
            "hamiltonian_drift": traj.hamiltonian_drift,
            "position_sup": traj.position_sup(),
        }
    diameters = [table[f"{b:g}"]["transverse_turn_diameter"] for b in cfg.portrait_b]
    summary = {
        "scenario": {"name": cfg.name, "omega": list(cfg.omega),
                     "b_values": list(cfg.portrait_b),
                     "x0": list(cfg.x0), "xi0": list(cfg.xi0),
                     "T": cfg.portrait_T, "dt": cfg.portrait_dt},
        "portraits": table,
        "diameter_monotone_decreasing": bool(
            all(d1 > d2 for d1, d2 in zip(diameters, diameters[1:]))
        ),
        "files": {str(p.relative_to(out)): _sha256(p) for p in files},
        "metadata": {"created_at": datetime.now(timezone.utc).isoformat()},
    }
    with open(out / "portrait_summary.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return summary
