"""HTTP service wrapping the laboratory.

Endpoints cover the five experiment verbs plus quick one-shot computations
(ground states, trajectories).  Scenario configs travel as INI text in the
request body, so a remote client needs no shared filesystem; artifact files
are written on the service side and their manifest is returned.

Error mapping: invalid configurations raise 422 with detail.kind =
"validation"; solver breakdowns raise 500 with detail.kind = "solver".  The
CLI translates those into exit codes 2 and 3.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .classical import integrate_trajectory
from .grid import make_grid
from .groundstate import GroundStateError, solve_ground_state
from .potentials import make_potential
from .propagator import BoundaryContaminationError, SolverError
from .runner import ScenarioValidationError, convergence_study, run_portrait, run_scenario
from .scenarios import (
    ScenarioError,
    builtin_scenario_names,
    load_builtin,
    parse_scenario,
    validate_scenario,
)
from .snapshots import SnapshotFormatError, read_snapshot

app = FastAPI(title="solimag", version=__version__)


def _validation_error(message: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"kind": "validation", "message": message})


def _solver_error(message: str) -> HTTPException:
    return HTTPException(status_code=500, detail={"kind": "solver", "message": message})


class HealthResponse(BaseModel):
    status: str
    version: str


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


class ScenarioListResponse(BaseModel):
    scenarios: List[str]


@app.get("/scenarios", response_model=ScenarioListResponse)
def scenarios() -> ScenarioListResponse:
    return ScenarioListResponse(scenarios=list(builtin_scenario_names()))


class GroundStateRequest(BaseModel):
    p: float
    dim: int = 1
    half_width: float = 20.0
    points: int = 4096
    tol: float = 1e-12
    max_iter: int = 500
    include_profile: bool = False


class GroundStateResponse(BaseModel):
    mass: float
    energy: float
    decay_rate: float
    peak: float
    residual: float
    iterations: int
    radial_nodes: Optional[List[float]] = None
    radial_values: Optional[List[float]] = None


@app.post("/groundstate", response_model=GroundStateResponse)
def groundstate(req: GroundStateRequest) -> GroundStateResponse:
    try:
        grid = make_grid(req.dim, req.half_width, req.points)
        gs = solve_ground_state(req.p, grid, tol=req.tol, max_iter=req.max_iter)
    except (ValueError,) as err:
        raise _validation_error(str(err))
    except GroundStateError as err:
        raise _solver_error(str(err))
    profile = None
    nodes = None
    if req.include_profile:
        stride = max(1, len(gs.radial_nodes) // 2048)
        nodes = [float(v) for v in gs.radial_nodes[::stride]]
        profile = [float(v) for v in gs.radial_values[::stride]]
    return GroundStateResponse(
        mass=gs.mass,
        energy=gs.energy,
        decay_rate=gs.decay_rate,
        peak=gs.peak,
        residual=gs.residual,
        iterations=gs.iterations,
        radial_nodes=nodes,
        radial_values=profile,
    )


class PotentialModel(BaseModel):
    electric: str = "zero"
    omega: Optional[List[float]] = None
    magnetic: str = "zero"
    b: float = 0.0
    domain_half_width: float = 10.0


class TrajectoryRequest(BaseModel):
    dim: int
    potential: PotentialModel
    x0: List[float]
    xi0: List[float]
    T: float
    dt: float
    stride: int = Field(default=1, ge=1, description="return every stride-th sample")


class TrajectoryResponse(BaseModel):
    t: List[float]
    x: List[List[float]]
    xi: List[List[float]]
    hamiltonian: List[float]
    hamiltonian_drift: float


@app.post("/trajectory", response_model=TrajectoryResponse)
def trajectory(req: TrajectoryRequest) -> TrajectoryResponse:
    try:
        pot = make_potential(
            req.dim,
            electric=req.potential.electric,
            magnetic=req.potential.magnetic,
            omega=req.potential.omega,
            b=req.potential.b,
            domain_half_width=req.potential.domain_half_width,
        )
        traj = integrate_trajectory(req.x0, req.xi0, pot, req.T, req.dt)
    except ValueError as err:
        raise _validation_error(str(err))
    s = slice(None, None, req.stride)
    return TrajectoryResponse(
        t=[float(v) for v in traj.times[s]],
        x=[[float(v) for v in row] for row in traj.positions[s]],
        xi=[[float(v) for v in row] for row in traj.velocities[s]],
        hamiltonian=[float(v) for v in traj.hamiltonians[s]],
        hamiltonian_drift=traj.hamiltonian_drift,
    )


class ScenarioRequest(BaseModel):
    config_text: Optional[str] = None
    builtin: Optional[str] = None
    output_dir: Optional[str] = None

    def resolve_text(self) -> str:
        if (self.config_text is None) == (self.builtin is None):
            raise ScenarioError("provide exactly one of config_text / builtin")
        if self.builtin is not None:
            return load_builtin(self.builtin)
        return self.config_text


class RunResponse(BaseModel):
    summary: dict


def _parse_request(req: ScenarioRequest):
    try:
        return parse_scenario(req.resolve_text())
    except ScenarioError as err:
        raise _validation_error(str(err))


@app.post("/scenario/validate", response_model=RunResponse)
def scenario_validate(req: ScenarioRequest) -> RunResponse:
    cfg = _parse_request(req)
    problems = validate_scenario(cfg)
    return RunResponse(summary={"name": cfg.name, "valid": not problems, "problems": problems})


def _execute(fn, req: ScenarioRequest) -> RunResponse:
    cfg = _parse_request(req)
    try:
        summary = fn(cfg, output_dir=req.output_dir)
    except ScenarioValidationError as err:
        raise _validation_error(str(err))
    except (SolverError, BoundaryContaminationError, GroundStateError) as err:
        raise _solver_error(str(err))
    return RunResponse(summary=summary)


@app.post("/scenario/run", response_model=RunResponse)
def scenario_run(req: ScenarioRequest) -> RunResponse:
    return _execute(run_scenario, req)


@app.post("/study/run", response_model=RunResponse)
def study_run(req: ScenarioRequest) -> RunResponse:
    return _execute(convergence_study, req)


@app.post("/portrait/run", response_model=RunResponse)
def portrait_run(req: ScenarioRequest) -> RunResponse:
    return _execute(run_portrait, req)


class InspectRequest(BaseModel):
    path: str


class InspectResponse(BaseModel):
    dim: int
    points: int
    half_width: float
    eps: float
    t: float
    p: float
    mass: float
    max_abs: float


@app.post("/snapshot/inspect", response_model=InspectResponse)
def snapshot_inspect(req: InspectRequest) -> InspectResponse:
    try:
        field = read_snapshot(req.path)
    except FileNotFoundError as err:
        raise _validation_error(str(err))
    except SnapshotFormatError as err:
        raise _validation_error(str(err))
    g = field.grid
    return InspectResponse(
        dim=g.dim,
        points=g.points,
        half_width=g.half_width,
        eps=field.eps,
        t=field.t,
        p=field.p,
        mass=float(g.integrate(np.abs(field.values) ** 2).real / field.eps**g.dim),
        max_abs=float(np.max(np.abs(field.values))),
    )
