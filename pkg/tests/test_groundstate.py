import numpy as np
import pytest

from solimag.grid import make_grid
from solimag.groundstate import (
    GroundStateError,
    energy_of,
    exact_profile_1d,
    fit_decay_rate,
    solve_ground_state,
)

SQRT2 = np.sqrt(2.0)


def residual_norm(gs):
    g = gs.grid
    r = gs.profile
    res = -0.5 * g.laplacian(r) + r - np.abs(r) ** (2 * gs.p) * r
    return np.sqrt(g.integrate(res**2))


def test_exact_profile_p1_satisfies_equation(exact_gs_p1):
    # the closed form is only trusted as an oracle after this residual check
    assert residual_norm(exact_gs_p1) <= 1e-10


def test_exact_profile_p2_satisfies_equation(exact_gs_p2):
    assert residual_norm(exact_gs_p2) <= 1e-10
    assert exact_gs_p2.peak == pytest.approx(3.0**0.25, abs=1e-12)


def test_exact_profile_p1_mass(exact_gs_p1):
    assert exact_gs_p1.mass == pytest.approx(2.0 * SQRT2, abs=1e-8)


def test_solver_matches_closed_form(solved_gs_p1, exact_gs_p1):
    assert np.max(np.abs(solved_gs_p1.profile - exact_gs_p1.profile)) <= 1e-6
    assert solved_gs_p1.peak == pytest.approx(SQRT2, abs=1e-6)
    assert solved_gs_p1.mass == pytest.approx(2.0 * SQRT2, abs=1e-6)


def test_solver_scale_converges_to_one(solved_gs_p1):
    assert abs(solved_gs_p1.scale_final - 1.0) <= 10 * 1e-10


def test_lagrange_identity(solved_gs_p1):
    g = solved_gs_p1.grid
    r = solved_gs_p1.profile
    res = -0.5 * g.laplacian(r) + r - r**3
    assert abs(g.integrate(res * r)) <= 10 * 1e-10


def test_grid_refinement_mass_stable():
    # tol 1e-10: the residual floor scales with k_max^2 * machine eps
    m_values = []
    for points in (2048, 4096):
        gs = solve_ground_state(1.0, make_grid(1, 20.0, points), tol=1e-10)
        m_values.append(gs.mass)
    assert abs(m_values[1] - m_values[0]) <= 1e-8


def test_critical_exponent_allowed_1d(grid_1d):
    # p = 2/dim exists as a stationary profile (feeds the collapse scenario)
    gs = solve_ground_state(2.0, grid_1d, tol=1e-10)
    assert gs.mass == pytest.approx(gs.grid.integrate(gs.profile**2))
    assert gs.residual <= 1e-10


@pytest.mark.parametrize("p", [0.0, -1.0, 2.5])
def test_rejects_bad_exponent(p, grid_1d):
    with pytest.raises(ValueError):
        solve_ground_state(p, grid_1d)


def test_rejects_bad_tol(grid_1d):
    with pytest.raises(ValueError):
        solve_ground_state(1.0, grid_1d, tol=-1.0)


def test_nonconvergence_raises(grid_1d):
    with pytest.raises(GroundStateError):
        solve_ground_state(1.0, grid_1d, tol=1e-10, max_iter=2)


def test_2d_profile_symmetric_and_positive(gs_2d_p05):
    u = gs_2d_p05.profile
    flipped = np.roll(np.flip(u, axis=0), 1, axis=0)  # node map of x -> -x
    assert np.max(np.abs(u - flipped)) <= 1e-8
    assert np.max(np.abs(u - u.T)) <= 1e-8
    assert u.min() >= -1e-14 * gs_2d_p05.peak
    # decreasing along the positive axis
    line = gs_2d_p05.radial_values
    assert np.all(np.diff(line) <= 1e-12 * gs_2d_p05.peak)


def test_energy_of_zero():
    g = make_grid(1, 10.0, 256)
    assert energy_of(np.zeros(g.shape), 1.0, g) == 0.0


def test_energy_of_exact_profile(exact_gs_p1):
    # oracle: quadrature of the closed form at 4x resolution
    fine = make_grid(1, 20.0, 16384)
    r = SQRT2 / np.cosh(SQRT2 * fine.axis)
    oracle = energy_of(r, 1.0, fine)
    assert exact_gs_p1.energy == pytest.approx(oracle, abs=1e-6)
    # and the analytic value -2 sqrt2 / 3
    assert oracle == pytest.approx(-2.0 * SQRT2 / 3.0, abs=1e-9)


def test_energy_scaling_identity(exact_gs_p1):
    val = energy_of(1.0 * exact_gs_p1.profile, 1.0, exact_gs_p1.grid)
    assert val == exact_gs_p1.energy


@pytest.mark.parametrize("p,expected", [(1.0, SQRT2), (2.0, SQRT2)])
def test_decay_rate(p, expected, grid_1d):
    gs = exact_profile_1d(p, grid_1d)
    assert gs.decay_rate == pytest.approx(expected, rel=0.02)


def test_decay_rate_needs_tail():
    with pytest.raises(GroundStateError):
        fit_decay_rate(np.linspace(0, 1, 50), np.zeros(50))


def test_exact_profile_needs_1d():
    with pytest.raises(ValueError):
        exact_profile_1d(1.0, make_grid(2, 10.0, 64))


def test_radial_evaluator_matches_closed_form(solved_gs_p1):
    s = np.linspace(0.0, 15.0, 1234)
    exact = SQRT2 / np.cosh(SQRT2 * s)
    assert np.max(np.abs(solved_gs_p1.radial(s) - exact)) <= 1e-8
    # beyond the table the tail is cut to zero
    assert solved_gs_p1.radial(np.array([25.0]))[0] == 0.0
