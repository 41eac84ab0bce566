"""Electric/magnetic potential pairs with analytic derivative evaluators.

A `PotentialSpec` bundles V, grad V, A, div A and the magnetic 2-form, the
skew-symmetric matrix with entries H_ij = d_j A_i - d_i A_j.  In 3D this is
the matrix

    [[ 0, -B3,  B2],
     [ B3,  0, -B1],
     [-B2,  B1,  0 ]],

so that H x equals -x cross B.  Evaluators take coordinates stacked on the
FIRST axis (shape (dim,) for a point, (dim, *spatial) for a mesh) and are
vectorised over the trailing axes.  Scenario authors supply the derivatives
analytically; `validate_potential` cross-checks them against central
differences at fixed probe points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PotentialSpec",
    "make_potential",
    "harmonic_electric",
    "zero_electric",
    "constant_field_magnetic",
    "zero_magnetic",
    "tabulated_potential",
    "validate_potential",
]


@dataclass(frozen=True)
class PotentialSpec:
    """Evaluators for V, grad V, A, div A and the magnetic 2-form H^B."""

    dim: int
    v: Callable
    grad_v: Callable
    a: Callable
    div_a: Callable
    hb: Callable
    v_c3: float
    a_c3: float
    name: str = "custom"


def _spatial_shape(x: np.ndarray) -> tuple:
    return x.shape[1:]


def harmonic_electric(omega, dim: int, domain_half_width: float = 10.0):
    """V(x) = 1/2 sum omega_j^2 x_j^2 with its gradient and a C3-size bound."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (dim,):
        raise ValueError(f"omega must have {dim} components")
    w2 = omega**2
    L = float(domain_half_width)

    def v(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * sum(w2[j] * x[j] ** 2 for j in range(dim))

    def grad_v(x):
        x = np.asarray(x, dtype=float)
        return np.stack([w2[j] * x[j] for j in range(dim)])

    # sup-norm estimate of sum_{|alpha|<=3} |D^alpha V| over [-L, L]^dim
    c3 = 0.5 * float(np.sum(w2)) * L**2 + float(np.sum(w2)) * L + float(np.sum(w2))
    return v, grad_v, c3


def zero_electric(dim: int):
    def v(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(_spatial_shape(x))

    def grad_v(x):
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x)

    return v, grad_v, 0.0


def constant_field_magnetic(b: float, dim: int, domain_half_width: float = 10.0):
    """Linear vector potential of a constant field of strength b.

    2D: A = (b/2)(-x2, x1); 3D likewise with B = (0, 0, b).  div A = 0 and
    the 2-form is constant.
    """
    if dim not in (2, 3):
        raise ValueError("constant-field potential needs dim 2 or 3")
    b = float(b)
    L = float(domain_half_width)

    def a(x):
        x = np.asarray(x, dtype=float)
        comps = [-0.5 * b * x[1], 0.5 * b * x[0]]
        if dim == 3:
            comps.append(np.zeros(_spatial_shape(x)))
        return np.stack(comps)

    def div_a(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(_spatial_shape(x))

    hb_mat = np.zeros((dim, dim))
    hb_mat[0, 1] = -b  # H_12 = d2 A_1 - d1 A_2 = -B3
    hb_mat[1, 0] = b

    def hb(x):
        x = np.asarray(x, dtype=float)
        shape = _spatial_shape(x)
        if shape == ():
            return hb_mat.copy()
        return np.broadcast_to(
            hb_mat.reshape((dim, dim) + (1,) * len(shape)), (dim, dim) + shape
        ).copy()

    c3 = 0.5 * abs(b) * L + abs(b)  # per-component sup + first derivative
    return a, div_a, hb, c3


def zero_magnetic(dim: int):
    def a(x):
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x)

    def div_a(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(_spatial_shape(x))

    def hb(x):
        x = np.asarray(x, dtype=float)
        shape = _spatial_shape(x)
        return np.zeros((dim, dim) + shape)

    return a, div_a, hb, 0.0


def make_potential(
    dim: int,
    electric: str = "zero",
    magnetic: str = "zero",
    omega=None,
    b: float = 0.0,
    domain_half_width: float = 10.0,
    validate: bool = True,
) -> PotentialSpec:
    """Assemble a PotentialSpec from the built-in menu.

    electric: "harmonic" (needs omega) or "zero"; magnetic: "constant_b"
    (needs b) or "zero".
    """
    if electric == "harmonic":
        if omega is None:
            raise ValueError("harmonic electric potential needs omega")
        v, grad_v, v_c3 = harmonic_electric(omega, dim, domain_half_width)
    elif electric == "zero":
        v, grad_v, v_c3 = zero_electric(dim)
    else:
        raise ValueError(f"unknown electric potential kind {electric!r}")

    if magnetic == "constant_b":
        a, div_a, hb, a_c3 = constant_field_magnetic(b, dim, domain_half_width)
    elif magnetic == "zero":
        a, div_a, hb, a_c3 = zero_magnetic(dim)
    else:
        raise ValueError(f"unknown magnetic potential kind {magnetic!r}")

    pot = PotentialSpec(
        dim=dim,
        v=v,
        grad_v=grad_v,
        a=a,
        div_a=div_a,
        hb=hb,
        v_c3=v_c3,
        a_c3=a_c3,
        name=f"{electric}+{magnetic}",
    )
    if validate:
        validate_potential(pot, half_width=domain_half_width)
    return pot


def tabulated_potential(grid, v_table, a_tables=None, name="tabulated") -> PotentialSpec:
    """Extension point: potentials given as grid tables.

    Derivatives come from second-order finite differences of the tables, so
    the analytic-accuracy guarantees of the built-ins are lost; documented as
    such for externally supplied data.
    """
    from scipy.interpolate import RegularGridInterpolator

    dim = grid.dim
    axes = (grid.axis,) * dim
    v_table = np.asarray(v_table, dtype=float)
    if a_tables is None:
        a_tables = [np.zeros(grid.shape) for _ in range(dim)]
    a_tables = [np.asarray(t, dtype=float) for t in a_tables]

    def interp(table):
        f = RegularGridInterpolator(axes, table, bounds_error=False, fill_value=0.0)

        def call(x):
            x = np.asarray(x, dtype=float)
            pts = np.moveaxis(x, 0, -1)
            return f(pts.reshape(-1, dim)).reshape(x.shape[1:])

        return call

    v = interp(v_table)
    grads_v = [interp(np.gradient(v_table, grid.spacing, axis=j)) for j in range(dim)]
    jac = [
        [interp(np.gradient(a_tables[i], grid.spacing, axis=j)) for j in range(dim)]
        for i in range(dim)
    ]
    a_interp = [interp(t) for t in a_tables]

    def grad_v(x):
        return np.stack([g(x) for g in grads_v])

    def a(x):
        return np.stack([f(x) for f in a_interp])

    def div_a(x):
        return sum(jac[j][j](x) for j in range(dim))

    def hb(x):
        x = np.asarray(x, dtype=float)
        shape = x.shape[1:]
        out = np.zeros((dim, dim) + shape)
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    out[i, j] = jac[i][j](x) - jac[j][i](x)
        return out

    v_c3 = float(np.max(np.abs(v_table))) + 1.0
    a_c3 = max(float(np.max(np.abs(t))) for t in a_tables) + 1.0
    return PotentialSpec(dim, v, grad_v, a, div_a, hb, v_c3, a_c3, name)


def validate_potential(
    pot: PotentialSpec,
    half_width: float = 5.0,
    n_probes: int = 12,
    fd_step: float = 1e-5,
    rtol: float = 1e-6,
) -> None:
    """Cross-check grad V, div A and H^B against central differences.

    Probe points are drawn from a fixed-seed generator, so validation is
    deterministic.  Raises ValueError on disagreement beyond the O(h^2)
    budget and on non-skew-symmetric H^B.
    """
    rng = np.random.default_rng(20240713)
    dim = pot.dim
    probes = rng.uniform(-0.5 * half_width, 0.5 * half_width, size=(n_probes, dim))
    scale_v = max(1.0, pot.v_c3)
    scale_a = max(1.0, pot.a_c3)
    for x in probes:
        h = np.eye(dim) * fd_step
        fd_grad = np.array(
            [(pot.v(x + h[j]) - pot.v(x - h[j])) / (2 * fd_step) for j in range(dim)]
        )
        if np.max(np.abs(fd_grad - pot.grad_v(x))) > rtol * scale_v:
            raise ValueError(f"grad_v disagrees with finite differences at {x}")
        jac = np.stack(
            [(pot.a(x + h[j]) - pot.a(x - h[j])) / (2 * fd_step) for j in range(dim)],
            axis=1,
        )  # jac[i, j] = d_j A_i
        hb = np.asarray(pot.hb(x))
        if np.max(np.abs(hb + hb.T)) > 1e-12 * max(1.0, np.max(np.abs(hb))):
            raise ValueError(f"H^B is not skew-symmetric at {x}")
        fd_hb = jac - jac.T
        if np.max(np.abs(fd_hb - hb)) > rtol * scale_a:
            raise ValueError(f"H^B disagrees with finite differences of A at {x}")
        if abs(np.trace(jac) - pot.div_a(x)) > rtol * scale_a:
            raise ValueError(f"div_a disagrees with finite differences at {x}")
