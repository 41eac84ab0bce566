"""Mass-preserving propagation of the semiclassical magnetic NLS.

The equation i*eps dphi/dt = H_lin phi - |phi|^(2p) phi is advanced by Strang
splitting: an exact pointwise nonlinear phase rotation for half a step, a full
Crank-Nicolson (Cayley) step of the linear magnetic Hamiltonian

    H_lin = 1/2 (-eps^2 lap + 2 i eps A . grad + |A|^2 + i eps div A) + V,

and another nonlinear half step.  The Cayley system (I + i tau H) phi+ =
(I - i tau H) phi, tau = dt/(2 eps), is solved matrix-free with GMRES
preconditioned by the constant-coefficient symbol 1 + i tau (eps^2 k^2 / 2 +
c), c = mean(V + |A|^2/2) - one transform pair per application.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .grid import Grid
from .groundstate import GroundState
from .potentials import PotentialSpec

__all__ = [
    "WaveField",
    "SolverError",
    "BoundaryContaminationError",
    "initial_datum",
    "soliton_ansatz",
    "apply_hamiltonian",
    "step",
    "evolve",
]

log = logging.getLogger(__name__)

# |phi| on the outermost node shell must stay below this fraction of max|phi|.
BOUNDARY_GUARD = 1e-8


class SolverError(RuntimeError):
    """Krylov solve failed; dt is too large or solver_tol too tight."""


class BoundaryContaminationError(RuntimeError):
    """The field reached the periodic boundary; the run is no longer trusted."""


@dataclass(frozen=True)
class WaveField:
    """Complex field sample phi(x, t) with its semiclassical parameter."""

    values: np.ndarray
    grid: Grid
    eps: float
    t: float
    p: float

    def copy(self) -> "WaveField":
        return replace(self, values=self.values.copy())


@lru_cache(maxsize=16)
def _on_grid(pot: PotentialSpec, grid: Grid):
    """Potential tables on the grid: (V, [A_j], div A, |A|^2, cayley shift c)."""
    mesh = np.stack(grid.mesh)
    v = np.asarray(pot.v(mesh), dtype=float)
    a = np.asarray(pot.a(mesh), dtype=float)
    div_a = np.asarray(pot.div_a(mesh), dtype=float)
    abs_a2 = np.sum(a**2, axis=0)
    a_zero = not np.any(a)
    shift = float(np.mean(v + 0.5 * abs_a2))
    return v, a, div_a, abs_a2, a_zero, shift


def _apply_linear(values, grid: Grid, eps: float, pot: PotentialSpec):
    v, a, div_a, abs_a2, a_zero, _ = _on_grid(pot, grid)
    spec = grid.fft(values)
    if a_zero:
        kinetic = grid.ifft(0.5 * eps**2 * grid.k2 * spec)
        return kinetic + v * values
    out = grid.ifft(0.5 * eps**2 * grid.k2 * spec)
    adv = np.zeros_like(values)
    for j in range(grid.dim):
        adv += a[j] * grid.ifft(grid.ik[j] * spec)
    out += 1j * eps * adv + 0.5 * (abs_a2 + 1j * eps * div_a) * values
    return out + v * values


def apply_hamiltonian(field: WaveField, pot: PotentialSpec) -> np.ndarray:
    """Full Hamiltonian 1/2 ((eps/i) grad - A)^2 phi + V phi on the grid."""
    return _apply_linear(field.values, field.grid, field.eps, pot)


def soliton_ansatz(
    gs: GroundState,
    grid: Grid,
    eps: float,
    center,
    velocity,
    gauge_value=None,
    gauge_point=None,
    theta: float = 0.0,
) -> np.ndarray:
    """Sample r((x - center)/eps) e^{i(xi.x + theta + a0.(x - x(t)))/eps}.

    `gauge_value` is A evaluated at the trajectory point `gauge_point`; both
    default to zero, which reduces the phase to the magnetic-free ansatz.
    """
    center = np.asarray(center, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    mesh = grid.mesh
    radius2 = sum((mesh[j] - center[j]) ** 2 for j in range(grid.dim))
    amp = gs.radial(np.sqrt(radius2) / eps)
    phase = theta + sum(velocity[j] * mesh[j] for j in range(grid.dim))
    if gauge_value is not None:
        gauge_value = np.asarray(gauge_value, dtype=float)
        gauge_point = np.asarray(gauge_point, dtype=float)
        phase = phase + sum(
            gauge_value[j] * (mesh[j] - gauge_point[j]) for j in range(grid.dim)
        )
    return amp * np.exp(1j * phase / eps)


def initial_datum(
    gs: GroundState, x0, xi0, pot: PotentialSpec, eps: float, grid: Grid
) -> WaveField:
    """Soliton datum r((x-x0)/eps) e^{i [A(x0).(x-x0) + x.xi0] / eps} at t=0."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    x0 = np.asarray(x0, dtype=float)
    xi0 = np.asarray(xi0, dtype=float)
    values = soliton_ansatz(
        gs, grid, eps, x0, xi0, gauge_value=pot.a(x0), gauge_point=x0, theta=0.0
    )
    peak = float(np.max(np.abs(values)))
    shell = grid.boundary_abs_max(values)
    if shell > BOUNDARY_GUARD * peak:
        raise ValueError(
            "soliton support overflows grid: boundary amplitude "
            f"{shell:.3e} exceeds {BOUNDARY_GUARD:.0e} * max |phi| = "
            f"{BOUNDARY_GUARD * peak:.3e}"
        )
    return WaveField(values=values, grid=grid, eps=float(eps), t=0.0, p=gs.p)


def _cayley_solve(values, grid: Grid, eps, pot, dt, solver_tol):
    """Solve (I + i tau H) phi+ = (I - i tau H) phi to relative residual tol."""
    tau = dt / (2.0 * eps)
    _, _, _, _, _, shift = _on_grid(pot, grid)
    symbol = 1.0 + 1j * tau * (0.5 * eps**2 * grid.k2 + shift)
    shape = grid.shape
    n = grid.size

    matvecs = [0]

    def matvec(vec):
        matvecs[0] += 1
        w = vec.reshape(shape)
        return (w + 1j * tau * _apply_linear(w, grid, eps, pot)).ravel()

    def precond(vec):
        return grid.ifft(grid.fft(vec.reshape(shape)) / symbol).ravel()

    op = LinearOperator((n, n), matvec=matvec, dtype=complex)
    pre = LinearOperator((n, n), matvec=precond, dtype=complex)
    rhs = (values - 1j * tau * _apply_linear(values, grid, eps, pot)).ravel()
    rhs_norm = float(np.linalg.norm(rhs))

    # aim below the contract so the returned residual clears it with margin
    x, _ = gmres(
        op,
        rhs,
        x0=rhs.copy(),
        rtol=0.05 * solver_tol,
        atol=0.0,
        restart=40,
        maxiter=10,
        M=pre,
    )
    residual = float(np.linalg.norm(op.matvec(x) - rhs)) / rhs_norm
    if residual > solver_tol:
        x, _ = gmres(
            op,
            rhs,
            x0=x,
            rtol=5e-4 * solver_tol,
            atol=0.0,
            restart=40,
            maxiter=30,
            M=pre,
        )
        residual = float(np.linalg.norm(op.matvec(x) - rhs)) / rhs_norm
    if residual > solver_tol:
        raise SolverError(
            f"Cayley solve stalled at relative residual {residual:.3e} > "
            f"{solver_tol:.1e} (dt too large or solver_tol too tight)"
        )
    log.debug("cayley solve: %d matvecs, residual %.2e", matvecs[0], residual)
    return x.reshape(shape)


def nonlinear_half_kick(values: np.ndarray, dt: float, eps: float, p: float) -> np.ndarray:
    """Exact focusing sub-flow over dt/2: phase rotation at rate |phi|^2p / eps.

    |phi| is invariant under the sub-flow, so the rotation is exact.
    """
    return values * np.exp(1j * (0.5 * dt / eps) * np.abs(values) ** (2.0 * p))


def step(field: WaveField, dt: float, pot: PotentialSpec, solver_tol: float = 1e-10) -> WaveField:
    """One Strang step: nonlinear half kick, Cayley linear step, half kick."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    if dt == 0.0:
        return field.copy()
    eps, p = field.eps, field.p
    values = nonlinear_half_kick(field.values, dt, eps, p)
    values = _cayley_solve(values, field.grid, eps, pot, dt, solver_tol)
    values = nonlinear_half_kick(values, dt, eps, p)
    return WaveField(values=values, grid=field.grid, eps=eps, t=field.t + dt, p=p)


def guard_boundary(field: WaveField, threshold: float = BOUNDARY_GUARD) -> float:
    """Return the shell/peak amplitude ratio, raising once it breaks the guard.

    The default threshold suits radiation-free profiles (the initial datum,
    exact traveling solitons).  Scenarios whose O(eps) defect genuinely
    radiates set a measured scenario-level threshold instead: the radiated
    field wraps around the torus at amplitudes far above 1e-8 * peak long
    before the soliton itself comes anywhere near the boundary.
    """
    peak = float(np.max(np.abs(field.values)))
    shell = field.grid.boundary_abs_max(field.values)
    ratio = shell / peak if peak > 0 else 0.0
    if ratio > threshold:
        raise BoundaryContaminationError(
            f"boundary contamination at t={field.t:.6g}: shell/peak = {ratio:.3e} "
            f"exceeds {threshold:.0e}"
        )
    return ratio


def evolve(
    field: WaveField,
    T: float,
    dt: float,
    pot: PotentialSpec,
    observer_cadence: int = 1,
    solver_tol: float = 1e-10,
    observer=None,
    boundary_guard: float = BOUNDARY_GUARD,
) -> list:
    """Advance to time t + T, emitting (snapshot, record) pairs on a cadence.

    Snapshots are immutable copies taken every `observer_cadence` steps (the
    initial and final fields are always included).  `observer` maps a snapshot
    to its diagnostics record; with the default None the record slot is None
    and callers fill diagnostics afterwards.  The boundary guard is enforced
    at every emission.  The step is nudged to T/round(T/dt) so the run lands
    exactly on t + T (the same rule the trajectory integrator uses, keeping
    both time lattices aligned).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if observer_cadence < 1:
        raise ValueError("observer_cadence must be >= 1")
    n = max(1, int(round(T / dt))) if T > 0 else 0
    dt = T / n if n else dt

    def emit(f):
        guard_boundary(f, boundary_guard)
        snap = f.copy()
        return (snap, observer(snap) if observer is not None else None)

    out = [emit(field)]
    for k in range(1, n + 1):
        field = step(field, dt, pot, solver_tol)
        if k % observer_cadence == 0 or k == n:
            out.append(emit(field))
    return out
