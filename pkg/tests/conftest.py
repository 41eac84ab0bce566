import numpy as np
import pytest

from solimag.grid import make_grid
from solimag.groundstate import exact_profile_1d, solve_ground_state


@pytest.fixture(scope="session")
def grid_1d():
    return make_grid(1, 20.0, 4096)


@pytest.fixture(scope="session")
def exact_gs_p1(grid_1d):
    return exact_profile_1d(1.0, grid_1d)


@pytest.fixture(scope="session")
def exact_gs_p2(grid_1d):
    return exact_profile_1d(2.0, grid_1d)


@pytest.fixture(scope="session")
def solved_gs_p1(grid_1d):
    return solve_ground_state(1.0, grid_1d, tol=1e-10, max_iter=500)


@pytest.fixture(scope="session")
def gs_2d_p05():
    return solve_ground_state(0.5, make_grid(2, 16.0, 256), tol=1e-12, max_iter=500)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240801)


TINY_SCENARIO = """
[scenario]
name = tiny
dim = 1
p = 1.0
eps = 0.2

[grid]
half_width = 4.0
points = 256

[potential]
electric = zero
magnetic = zero

[dynamics]
x0 = 0.0
xi0 = 0.3
T = 0.05
dt = 1e-3
observer_cadence = 10
snapshot_cadence = 2
solver_tol = 1e-10

[groundstate]
half_width = 16.0
points = 1024

[output]
directory = out/tiny
"""

PORTRAIT_SCENARIO = """
[scenario]
name = mini_portrait
dim = 3
p = 0.5
eps = 0.1

[grid]
half_width = 4.0
points = 256

[potential]
electric = harmonic
omega = 1.0, 1.4, 1.2
magnetic = constant_b
b = 5.0

[dynamics]
x0 = 1.0, 0.5, 0.8
xi0 = 0.5, -0.3, 0.4
T = 0.5
dt_over_eps = 0.1
observer_cadence = 10
solver_tol = 1e-10

[groundstate]
half_width = 12.0
points = 128

[portrait]
b_values = 0, 5, 20
T = 6.0
dt = 1e-3

[output]
directory = out/mini_portrait
"""

@pytest.fixture(scope="session")
def tiny_scenario_text():
    return TINY_SCENARIO


@pytest.fixture(scope="session")
def portrait_scenario_text():
    return PORTRAIT_SCENARIO
