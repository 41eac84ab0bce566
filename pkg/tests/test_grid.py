import numpy as np
import pytest

from solimag.grid import make_grid


def test_make_grid_spacing():
    g = make_grid(1, 20.0, 4096)
    assert g.spacing == pytest.approx(40.0 / 4096, rel=0, abs=0)
    assert g.axis[0] == -20.0
    assert g.axis[-1] == pytest.approx(20.0 - g.spacing)


def test_make_grid_2d_shape():
    g = make_grid(2, 12.0, 256)
    assert g.shape == (256, 256)
    assert g.size == 256**2


@pytest.mark.parametrize(
    "args",
    [
        (1, 20.0, 4095),   # not a power of two
        (1, 20.0, 4),      # too small
        (4, 10.0, 64),     # unsupported dimension
        (0, 10.0, 64),
        (1, -1.0, 64),     # bad half width
    ],
)
def test_make_grid_rejects(args):
    with pytest.raises(ValueError):
        make_grid(*args)


def test_wavenumbers_are_pi_j_over_L():
    g = make_grid(1, 20.0, 64)
    assert g.wavenumbers[1] == pytest.approx(np.pi / 20.0)
    assert g.wavenumbers[-1] == pytest.approx(-np.pi / 20.0)


def test_integrate_constant():
    g = make_grid(1, 20.0, 256)
    assert g.integrate(np.ones(g.shape)) == pytest.approx(40.0, abs=1e-12)


def test_integrate_ground_state_mass(exact_gs_p1):
    # int 2 sech^2(sqrt2 x) dx = 2 sqrt2, cross-checked by quadrature
    g = exact_gs_p1.grid
    val = g.integrate(exact_gs_p1.profile**2)
    assert val == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-8)


def test_integrate_odd_function():
    g = make_grid(1, 20.0, 512)
    x = g.axis
    assert abs(g.integrate(x * np.exp(-(x**2)))) <= 1e-12


def test_gradient_plane_wave_eigenfunction():
    g = make_grid(1, 10.0, 128)
    k0 = g.wavenumbers[5]
    f = np.exp(1j * k0 * g.axis)
    (df,) = g.gradient(f)
    assert np.max(np.abs(df - 1j * k0 * f)) <= 1e-12


def test_laplacian_of_constant():
    g = make_grid(2, 5.0, 32)
    assert np.max(np.abs(g.laplacian(np.ones(g.shape)))) <= 1e-12


def test_laplacian_of_exact_profile(exact_gs_p1):
    # rearranged stationary equation: lap r = 2 (r - r^3)
    g = exact_gs_p1.grid
    r = exact_gs_p1.profile
    assert np.max(np.abs(g.laplacian(r) - 2.0 * (r - r**3))) <= 1e-6


def test_parseval(rng):
    g = make_grid(2, 6.0, 64)
    f = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    phys = g.integrate(np.abs(f) ** 2).real
    spec = g.weight * np.sum(np.abs(g.fft(f)) ** 2) / g.size
    assert abs(phys - spec) <= 1e-12 * phys


def test_integration_by_parts():
    g = make_grid(1, 10.0, 256)
    x = g.axis
    f = np.exp(-(x**2))
    h = x * np.exp(-0.5 * x**2)
    (df,) = g.gradient(f)
    (dh,) = g.gradient(h)
    lhs = g.integrate(f * dh)
    rhs = -g.integrate(df * h)
    assert abs(lhs - rhs) <= 1e-10


def test_gradient_real_field_stays_real():
    g = make_grid(1, 10.0, 128)
    (df,) = g.gradient(np.exp(-g.axis**2))
    assert np.isrealobj(df)


def test_boundary_abs_max():
    g = make_grid(2, 1.0, 16)
    f = np.zeros(g.shape)
    f[0, 3] = 2.0   # on the x1 = -L face
    f[5, 5] = 9.0   # interior
    assert g.boundary_abs_max(f) == 2.0


def test_shape_mismatch_rejected():
    g = make_grid(1, 10.0, 128)
    with pytest.raises(ValueError):
        g.integrate(np.ones(64))


def test_transform_round_trip(rng):
    g = make_grid(2, 5.0, 64)
    f = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    back = g.ifft(g.fft(f))
    assert np.max(np.abs(back - f)) <= 1e-12 * np.max(np.abs(f))
