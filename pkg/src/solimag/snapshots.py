"""Binary snapshot files for complex wave fields.

Layout (everything little-endian):

    bytes 0..7   magic "SOLIMAG1"
    uint32       dim
    uint32*dim   points per axis (all equal on the uniform grids used here)
    float64      half_width L
    float64      eps
    float64      t
    float64      p
    payload      row-major complex values, real/imag interleaved float64
                 (2 * M^dim * 8 bytes)

Round trips are bit-exact; readers validate the magic and the exact payload
length.
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import make_grid
from .propagator import WaveField

__all__ = ["SnapshotFormatError", "write_snapshot", "read_snapshot", "MAGIC"]

MAGIC = b"SOLIMAG1"


class SnapshotFormatError(ValueError):
    pass


def write_snapshot(field: WaveField, path) -> None:
    g = field.grid
    header = MAGIC + struct.pack("<I", g.dim)
    header += struct.pack(f"<{g.dim}I", *((g.points,) * g.dim))
    header += struct.pack("<dddd", g.half_width, field.eps, field.t, field.p)
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_snapshot(path) -> WaveField:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[: len(MAGIC)] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {raw[:8]!r}")
    offset = len(MAGIC)
    (dim,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    if dim not in (1, 2, 3):
        raise SnapshotFormatError(f"{path}: unsupported dim {dim}")
    points = struct.unpack_from(f"<{dim}I", raw, offset)
    offset += 4 * dim
    if len(set(points)) != 1:
        raise SnapshotFormatError(f"{path}: anisotropic grids unsupported {points}")
    half_width, eps, t, p = struct.unpack_from("<dddd", raw, offset)
    offset += 32
    m = points[0]
    expected = 2 * m**dim * 8
    payload = raw[offset:]
    if len(payload) != expected:
        raise SnapshotFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    values = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    grid = make_grid(dim, half_width, m)
    return WaveField(
        values=values.reshape(grid.shape), grid=grid, eps=eps, t=t, p=p
    )
