"""Soliton dynamics laboratory for the semiclassical magnetic nonlinear
Schroedinger equation.

The package couples four numerical engines: a pseudospectral periodic grid
(`grid`), a Petviashvili ground-state solver (`groundstate`), a Newton-Lorentz
ODE integrator (`classical`) and a mass-preserving Strang/Crank-Nicolson wave
propagator (`propagator`).  A diagnostics suite (`diagnostics`) evaluates the
conserved quantities, moment surrogates and soliton-ansatz fits used to
measure how tightly the wave concentrates along the classical trajectory.
Experiments are described by INI scenario files (`scenarios`), executed by
`runner`, exposed over HTTP by `service` and driven from the command line by
the thin client in `cli`.
"""

from .grid import Grid, make_grid
from .groundstate import GroundState, solve_ground_state, exact_profile_1d
from .potentials import PotentialSpec, make_potential
from .classical import (
    ClassicalState,
    Trajectory,
    integrate_trajectory,
    exact_linear_trajectory,
)
from .propagator import WaveField, initial_datum, step, evolve

__all__ = [
    "Grid",
    "make_grid",
    "GroundState",
    "solve_ground_state",
    "exact_profile_1d",
    "PotentialSpec",
    "make_potential",
    "ClassicalState",
    "Trajectory",
    "integrate_trajectory",
    "exact_linear_trajectory",
    "WaveField",
    "initial_datum",
    "step",
    "evolve",
]

__version__ = "0.1.0"
