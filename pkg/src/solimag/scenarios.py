"""Scenario configuration: INI files with one section per subsystem.

A scenario file looks like

    [scenario]
    name = magnetic_2d
    dim = 2
    p = 0.5
    eps = 0.2, 0.1, 0.05

    [grid]
    half_width = 3.2
    points = 256

    [potential]
    electric = harmonic        ; harmonic | zero
    omega = 0.8, 0.8
    magnetic = constant_b      ; constant_b | zero
    b = 0.4

    [dynamics]
    x0 = 0.4, 0.0
    xi0 = 0.0, 0.2
    T = 1.0
    dt_over_eps = 0.1          ; or an absolute dt = ...
    observer_cadence = 10
    solver_tol = 1e-10

    [groundstate]
    half_width = 16.0
    points = 256
    tol = 1e-12
    max_iter = 500

    [output]
    directory = out/magnetic_2d

All physical parameters are explicit.  `dt` and `dt_over_eps` are mutually
exclusive; the latter scales the step with each eps of a sweep.  Snapshot
files are written every `snapshot_cadence` emitted records (0 keeps only the
first and last).  Validation precomputes the classical trajectory and checks
the grid against the orbit plus the soliton width margin.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .classical import integrate_trajectory
from .potentials import PotentialSpec, make_potential

__all__ = [
    "ScenarioConfig",
    "ScenarioError",
    "parse_scenario",
    "validate_scenario",
    "builtin_scenario_names",
    "load_builtin",
]

BUILTIN_SCENARIOS = (
    "portrait_ex1",
    "free_soliton",
    "static_critical_point",
    "magnetic_2d",
    "magnetic_2d_study",
    "critical_collapse",
)


class ScenarioError(ValueError):
    """Configuration failed to parse or violated an invariant."""


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    dim: int
    p: float
    eps: tuple
    critical: bool
    grid_half_width: float
    grid_points: int
    electric: str
    omega: tuple
    magnetic: str
    b: float
    x0: tuple
    xi0: tuple
    T: float
    dt: float | None
    dt_over_eps: float | None
    observer_cadence: int
    snapshot_cadence: int
    solver_tol: float
    boundary_guard: float
    gs_half_width: float
    gs_points: int
    gs_tol: float
    gs_max_iter: int
    output_dir: str
    portrait_b: tuple = field(default=())
    portrait_T: float = 20.0
    portrait_dt: float = 2e-4

    def dt_for(self, eps: float) -> float:
        return self.dt if self.dt is not None else self.dt_over_eps * eps

    def potential(self, validate: bool = True) -> PotentialSpec:
        return make_potential(
            self.dim,
            electric=self.electric,
            magnetic=self.magnetic,
            omega=self.omega if self.electric == "harmonic" else None,
            b=self.b,
            domain_half_width=self.grid_half_width,
            validate=validate,
        )


def _floats(raw: str) -> tuple:
    return tuple(float(v.strip()) for v in raw.split(",") if v.strip())


def parse_scenario(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ScenarioError(f"config does not parse: {err}") from err

    def need(section, key, conv=str):
        if not cp.has_option(section, key):
            raise ScenarioError(f"missing [{section}] {key}")
        try:
            return conv(cp.get(section, key))
        except ValueError as err:
            raise ScenarioError(f"bad value for [{section}] {key}: {err}") from err

    def opt(section, key, conv, default):
        if not cp.has_option(section, key):
            return default
        return conv(cp.get(section, key))

    sc = "scenario"
    dyn = "dynamics"
    dt = opt(dyn, "dt", float, None)
    dt_over_eps = opt(dyn, "dt_over_eps", float, None)
    if (dt is None) == (dt_over_eps is None):
        raise ScenarioError("exactly one of [dynamics] dt / dt_over_eps is required")

    cfg = ScenarioConfig(
        name=need(sc, "name"),
        dim=need(sc, "dim", int),
        p=need(sc, "p", float),
        eps=need(sc, "eps", _floats),
        critical=opt(sc, "critical", lambda s: s.strip().lower() == "true", False),
        grid_half_width=need("grid", "half_width", float),
        grid_points=need("grid", "points", int),
        electric=need("potential", "electric"),
        omega=opt("potential", "omega", _floats, ()),
        magnetic=need("potential", "magnetic"),
        b=opt("potential", "b", float, 0.0),
        x0=need(dyn, "x0", _floats),
        xi0=need(dyn, "xi0", _floats),
        T=need(dyn, "T", float),
        dt=dt,
        dt_over_eps=dt_over_eps,
        observer_cadence=need(dyn, "observer_cadence", int),
        snapshot_cadence=opt(dyn, "snapshot_cadence", int, 0),
        solver_tol=need(dyn, "solver_tol", float),
        boundary_guard=opt(dyn, "boundary_guard", float, 1e-8),
        gs_half_width=need("groundstate", "half_width", float),
        gs_points=need("groundstate", "points", int),
        gs_tol=opt("groundstate", "tol", float, 1e-12),
        gs_max_iter=opt("groundstate", "max_iter", int, 500),
        output_dir=need("output", "directory"),
        portrait_b=opt("portrait", "b_values", _floats, ()),
        portrait_T=opt("portrait", "T", float, 20.0),
        portrait_dt=opt("portrait", "dt", float, 2e-4),
    )
    return cfg


def validate_scenario(cfg: ScenarioConfig) -> list:
    """Return the list of violated invariants (empty when the config is sound)."""
    problems = []
    if cfg.dim not in (1, 2, 3):
        problems.append(f"dim must be 1, 2 or 3, got {cfg.dim}")
    for label, points in (("grid", cfg.grid_points), ("groundstate", cfg.gs_points)):
        if points < 8 or (points & (points - 1)) != 0:
            problems.append(f"{label} points must be a power of two >= 8, got {points}")
    if cfg.dim in (1, 2, 3):
        if not cfg.p > 0:
            problems.append(f"p must be positive, got {cfg.p}")
        elif cfg.p >= 2.0 / cfg.dim and not cfg.critical:
            problems.append(
                f"p = {cfg.p} >= 2/dim = {2.0/cfg.dim:g} requires the 'critical' tag"
            )
        elif cfg.p > 2.0 / cfg.dim:
            problems.append(f"p = {cfg.p} beyond the critical exponent {2.0/cfg.dim:g}")
    if not cfg.eps:
        problems.append("eps list is empty")
    if any(not (0.0 < e <= 1.0) for e in cfg.eps):
        problems.append(f"every eps must lie in (0, 1], got {cfg.eps}")
    if cfg.electric not in ("harmonic", "zero"):
        problems.append(f"unknown electric potential {cfg.electric!r}")
    if cfg.electric == "harmonic" and len(cfg.omega) != cfg.dim:
        problems.append("harmonic potential needs one omega per axis")
    if cfg.magnetic not in ("constant_b", "zero"):
        problems.append(f"unknown magnetic potential {cfg.magnetic!r}")
    if cfg.magnetic == "constant_b" and cfg.dim == 1:
        problems.append("constant_b needs dim >= 2")
    if len(cfg.x0) != cfg.dim or len(cfg.xi0) != cfg.dim:
        problems.append("x0 and xi0 must have dim components")
    if cfg.T < 0:
        problems.append(f"T must be nonnegative, got {cfg.T}")
    if cfg.dt is not None and cfg.dt <= 0:
        problems.append("dt must be positive")
    if cfg.dt_over_eps is not None and cfg.dt_over_eps <= 0:
        problems.append("dt_over_eps must be positive")
    if cfg.observer_cadence < 1:
        problems.append("observer_cadence must be >= 1")
    if cfg.solver_tol <= 0:
        problems.append("solver_tol must be positive")
    if not (0.0 < cfg.boundary_guard <= 1e-2):
        problems.append(
            f"boundary_guard must lie in (0, 1e-2], got {cfg.boundary_guard}"
        )
    if problems:
        return problems

    # grid vs orbit: the domain must hold the trajectory range plus ten
    # soliton widths (decay length 1/sigma with the universal tail sigma=sqrt2)
    try:
        pot = cfg.potential(validate=False)
        dt_probe = min(1e-2, *(cfg.dt_for(e) for e in cfg.eps)) if cfg.T > 0 else 1e-2
        traj = integrate_trajectory(cfg.x0, cfg.xi0, pot, cfg.T, dt_probe)
        orbit_sup = traj.position_sup()
    except Exception as err:  # pragma: no cover - defensive
        problems.append(f"trajectory precomputation failed: {err}")
        return problems
    width = 1.0 / np.sqrt(2.0)
    eps_max = max(cfg.eps)
    required = orbit_sup + 10.0 * eps_max * width
    if cfg.grid_half_width < required:
        problems.append(
            "grid too small for the orbit: half_width "
            f"{cfg.grid_half_width} < orbit sup {orbit_sup:.3f} + 10 soliton "
            f"widths {10.0 * eps_max * width:.3f} = {required:.3f}"
        )
    # make sure the spectral grid can hold the profile oscillation scale
    h = 2.0 * cfg.grid_half_width / cfg.grid_points
    eps_min = min(cfg.eps)
    if h > eps_min / 2.0:
        problems.append(
            f"grid spacing h = {h:.4f} too coarse for eps = {eps_min}: "
            "need h <= eps/2 to resolve the profile"
        )
    return problems


def builtin_scenario_names() -> tuple:
    return BUILTIN_SCENARIOS


def load_builtin(name: str) -> str:
    """Text of a packaged scenario file."""
    if name not in BUILTIN_SCENARIOS:
        raise ScenarioError(
            f"unknown builtin scenario {name!r}; available: {', '.join(BUILTIN_SCENARIOS)}"
        )
    return (
        resources.files("solimag")
        .joinpath("scenario_library", f"{name}.ini")
        .read_text()
    )
