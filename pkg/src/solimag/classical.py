"""Newton-Lorentz dynamics driving the concentration curve.

The first-order system is

    dx/dt  = xi,
    dxi/dt = -grad V(x) - H^B(x) xi,

with the 2-form H^B_ij = d_j A_i - d_i A_j.  The sign of the magnetic term
is pinned by the wave dynamics itself: for the minimally coupled operator
((eps/i) grad - A)^2 the Ehrenfest evolution of the covariant momentum is
dP/dt = -int H^B p - int grad V |phi|^2/eps^N (verified numerically by the
diagnostics suite), so the concentration curve feels the force -H^B xi =
+xi cross B.  The harmonic + constant-field benchmark then reads

    xi1' = -w1^2 x1 + b xi2,   xi2' = -w2^2 x2 - b xi1,

and its matrix exponential is the integrator oracle.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .potentials import PotentialSpec

__all__ = [
    "ClassicalState",
    "Trajectory",
    "lorentz_rhs",
    "hamiltonian",
    "integrate_trajectory",
    "exact_linear_trajectory",
    "trajectory_to_csv",
    "transverse_turn_diameter",
]


@dataclass(frozen=True)
class ClassicalState:
    t: float
    x: np.ndarray
    xi: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled Newton-Lorentz flow with Hamiltonian samples."""

    times: np.ndarray        # (n+1,)
    positions: np.ndarray    # (n+1, dim)
    velocities: np.ndarray   # (n+1, dim)
    hamiltonians: np.ndarray # (n+1,)

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def state(self, index: int) -> ClassicalState:
        return ClassicalState(
            t=float(self.times[index]),
            x=self.positions[index].copy(),
            xi=self.velocities[index].copy(),
        )

    def at_time(self, t: float) -> ClassicalState:
        """State at a sample time (must coincide with a stored sample)."""
        index = int(round((t - self.times[0]) / self.dt)) if self.dt else 0
        if index < 0 or index >= len(self.times) or abs(self.times[index] - t) > 1e-9 * max(
            1.0, abs(t)
        ):
            raise ValueError(f"t={t} is not a stored sample of this trajectory")
        return self.state(index)

    @property
    def hamiltonian_drift(self) -> float:
        return float(np.max(np.abs(self.hamiltonians - self.hamiltonians[0])))

    def position_sup(self) -> float:
        return float(np.max(np.abs(self.positions)))


def lorentz_rhs(state: ClassicalState, pot: PotentialSpec):
    """(dx, dxi) of the driving system; magnetic term enters as -H^B xi."""
    dx = state.xi.copy()
    dxi = -pot.grad_v(state.x) - np.asarray(pot.hb(state.x)) @ state.xi
    return dx, dxi


def hamiltonian(state: ClassicalState, pot: PotentialSpec) -> float:
    """First integral 1/2 |xi|^2 + V(x)."""
    return float(0.5 * np.dot(state.xi, state.xi) + pot.v(state.x))


def _rhs(z: np.ndarray, pot: PotentialSpec, dim: int) -> np.ndarray:
    x, xi = z[:dim], z[dim:]
    return np.concatenate([xi, -pot.grad_v(x) - np.asarray(pot.hb(x)) @ xi])


def integrate_trajectory(x0, xi0, pot: PotentialSpec, T: float, dt: float) -> Trajectory:
    """Classic fixed-step RK4 on [0, T] sampled at t = 0, dt, ..., T.

    The step is nudged to T/round(T/dt) so the last sample lands exactly on T
    while the lattice stays uniform.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if T < 0:
        raise ValueError("T must be nonnegative")
    x0 = np.asarray(x0, dtype=float)
    xi0 = np.asarray(xi0, dtype=float)
    dim = pot.dim
    if x0.shape != (dim,) or xi0.shape != (dim,):
        raise ValueError(f"x0 and xi0 must have shape ({dim},)")

    n = max(1, int(round(T / dt))) if T > 0 else 0
    dt = T / n if n else dt
    z = np.concatenate([x0, xi0])
    zs = np.empty((n + 1, 2 * dim))
    zs[0] = z
    for k in range(n):
        k1 = _rhs(z, pot, dim)
        k2 = _rhs(z + 0.5 * dt * k1, pot, dim)
        k3 = _rhs(z + 0.5 * dt * k2, pot, dim)
        k4 = _rhs(z + dt * k3, pot, dim)
        z = z + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        zs[k + 1] = z

    times = dt * np.arange(n + 1)
    positions = zs[:, :dim]
    velocities = zs[:, dim:]
    hams = 0.5 * np.sum(velocities**2, axis=1) + np.array(
        [pot.v(x) for x in positions]
    )
    return Trajectory(times, positions, velocities, hams)


def linear_system_matrix(omega, b: float) -> np.ndarray:
    """Constant matrix of the harmonic + constant-field system d/dt (x, xi)."""
    omega = np.asarray(omega, dtype=float)
    dim = omega.size
    if dim not in (2, 3):
        raise ValueError("linear benchmark needs dimension 2 or 3")
    hb = np.zeros((dim, dim))
    hb[0, 1] = -b
    hb[1, 0] = b
    m = np.zeros((2 * dim, 2 * dim))
    m[:dim, dim:] = np.eye(dim)
    m[dim:, :dim] = -np.diag(omega**2)
    m[dim:, dim:] = -hb
    return m


def exact_linear_trajectory(x0, xi0, omega, b: float, T: float, dt: float) -> Trajectory:
    """Matrix-exponential oracle z(t) = exp(tM) z(0) for the linear system.

    One scaling-and-squaring exponential of the step matrix is computed and
    reapplied, which keeps the per-sample error at roundoff level.
    """
    omega = np.asarray(omega, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    xi0 = np.asarray(xi0, dtype=float)
    dim = omega.size
    if x0.shape != (dim,) or xi0.shape != (dim,):
        raise ValueError(f"x0 and xi0 must have shape ({dim},)")
    m = linear_system_matrix(omega, b)
    n = max(1, int(round(T / dt))) if T > 0 else 0
    dt = T / n if n else dt
    step_matrix = expm(m * dt)
    zs = np.empty((n + 1, 2 * dim))
    zs[0] = np.concatenate([x0, xi0])
    for k in range(n):
        zs[k + 1] = step_matrix @ zs[k]
    times = dt * np.arange(n + 1)
    positions = zs[:, :dim]
    velocities = zs[:, dim:]
    w2 = omega**2
    hams = 0.5 * np.sum(velocities**2, axis=1) + 0.5 * positions**2 @ w2
    return Trajectory(times, positions, velocities, hams)


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write t, x_1..x_N, xi_1..xi_N, H rows with full float precision."""
    dim = traj.dim
    header = (
        ["t"]
        + [f"x{j+1}" for j in range(dim)]
        + [f"xi{j+1}" for j in range(dim)]
        + ["H"]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(len(traj.times)):
            row = (
                [traj.times[i]]
                + list(traj.positions[i])
                + list(traj.velocities[i])
                + [traj.hamiltonians[i]]
            )
            writer.writerow([f"{v:.17g}" for v in row])


def transverse_turn_diameter(traj: Trajectory) -> float:
    """Median turning diameter of the orbit projected on the (x1, x2) plane.

    Defined through the curvature radius R = |v|^2 / |v x a| of the planar
    projection (a from central differences of the velocity samples), which for
    pure cyclotron motion equals |v|/b, so the per-turn diameter 2R decreases
    as the field strength grows.
    """
    v = traj.velocities[:, :2]
    accel = np.gradient(v, traj.dt, axis=0)
    speed2 = np.sum(v**2, axis=1)
    cross = np.abs(v[:, 0] * accel[:, 1] - v[:, 1] * accel[:, 0])
    mask = speed2 > 1e-12 * np.max(speed2)
    radii = speed2[mask] ** 1.5 / np.maximum(cross[mask], 1e-300)
    return float(2.0 * np.median(radii))
