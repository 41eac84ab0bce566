"""Uniform periodic Cartesian grids with spectral calculus.

All fields live on the torus [-L, L)^dim sampled at a power-of-two number of
nodes per axis.  Integrals are the uniform periodic quadrature h^dim * sum,
derivatives are exact spectral derivatives (i*k multipliers), so everything
here is spectrally accurate for fields that decay below roundoff before the
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as _fft

__all__ = ["Grid", "make_grid"]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Periodic grid on [-half_width, half_width)^dim, `points` nodes per axis."""

    dim: int
    half_width: float
    points: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def weight(self) -> float:
        """Quadrature weight h^dim shared by every node."""
        return self.spacing**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        """Node coordinates along one axis: x_i = -L + i*h."""
        return -self.half_width + self.spacing * np.arange(self.points)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """k_j = pi*j/L on the symmetric index set j in [-M/2, M/2)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)

    @cached_property
    def mesh(self) -> tuple:
        """dim coordinate arrays of shape `shape` (ij indexing)."""
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    @cached_property
    def k2(self) -> np.ndarray:
        """|k|^2 multiplier array (Nyquist included; used by the Laplacian)."""
        out = np.zeros(self.shape)
        for j in range(self.dim):
            kj = self.wavenumbers.reshape([-1 if a == j else 1 for a in range(self.dim)])
            out = out + kj**2
        return out

    @cached_property
    def ik(self) -> tuple:
        """(i*k_j) multiplier arrays with the Nyquist mode zeroed.

        Zeroing the unpaired Nyquist frequency keeps the first derivative an
        exactly anti-Hermitian operator that maps real fields to real fields.
        """
        k = self.wavenumbers.copy()
        k[self.points // 2] = 0.0
        out = []
        for j in range(self.dim):
            kj = k.reshape([-1 if a == j else 1 for a in range(self.dim)])
            out.append(1j * np.broadcast_to(kj, self.shape))
        return tuple(out)

    def fft(self, field: np.ndarray) -> np.ndarray:
        return _fft.fftn(field)

    def ifft(self, spec: np.ndarray) -> np.ndarray:
        return _fft.ifftn(spec)

    def _check(self, field: np.ndarray) -> np.ndarray:
        field = np.asarray(field)
        if field.shape != self.shape:
            raise ValueError(f"field shape {field.shape} does not match grid {self.shape}")
        return field

    def integrate(self, field: np.ndarray):
        """h^dim * sum(field): the periodic quadrature of the domain integral."""
        field = self._check(field)
        return self.weight * field.sum()

    def gradient(self, field: np.ndarray) -> list:
        """Spectral gradient, one array per axis."""
        field = self._check(field)
        spec = self.fft(field)
        out = [self.ifft(ik * spec) for ik in self.ik]
        if np.isrealobj(field):
            out = [g.real for g in out]
        return out

    def laplacian(self, field: np.ndarray) -> np.ndarray:
        """Spectral Laplacian (-|k|^2 multiplier)."""
        field = self._check(field)
        out = self.ifft(-self.k2 * self.fft(field))
        return out.real if np.isrealobj(field) else out

    def boundary_abs_max(self, field: np.ndarray) -> float:
        """max |field| over the outermost shell of nodes (both faces per axis)."""
        field = self._check(field)
        worst = 0.0
        for j in range(self.dim):
            for edge in (0, -1):
                face = np.take(np.abs(field), edge, axis=j)
                worst = max(worst, float(np.max(face)))
        return worst


def make_grid(dim: int, half_width: float, points_per_axis: int) -> Grid:
    """Build a periodic grid, rejecting shapes the spectral kernels cannot take.

    `points_per_axis` must be a power of two ≥ 8 and `dim` one of 1, 2, 3.
    """
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
    if not isinstance(points_per_axis, (int, np.integer)):
        raise ValueError("points_per_axis must be an integer")
    if points_per_axis < 8 or not _is_power_of_two(int(points_per_axis)):
        raise ValueError(
            f"points_per_axis must be a power of two >= 8, got {points_per_axis}"
        )
    if not half_width > 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    return Grid(dim=int(dim), half_width=float(half_width), points=int(points_per_axis))
