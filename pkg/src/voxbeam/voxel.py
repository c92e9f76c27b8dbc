"""Voxel grid data model, thresholding indicator, porosity and CVOL file I/O.

A scan (or a synthetic lattice) is a dense block of Hounsfield-like values
(HU) on a regular grid. Material/void classification is a global threshold:
a voxel with HU >= threshold is material, everything else is fictitious
void that only carries a tiny stiffness scaling epsilon downstream.

Values are stored as uint16 (scanners emit integer attenuation bins), with
x-fastest flat ordering: flat = i + nx*(j + ny*k). Every module in this
package relies on that one layout.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

HU_DTYPE = np.uint16


class VolumeFormatError(Exception):
    """Raised when a CVOL file is malformed; the message names the bad field."""


@dataclass(frozen=True)
class VoxelGrid:
    """Dense scalar HU field with physical spacing (mm) and world origin (mm).

    Immutable after construction; safe to share between threads.
    """

    dims: tuple[int, int, int]
    spacing: tuple[float, float, float]
    values: np.ndarray
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        spacing = tuple(float(s) for s in self.spacing)
        origin = tuple(float(o) for o in self.origin)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise ValueError(f"dims must be three integers >= 1, got {self.dims}")
        if len(spacing) != 3 or any(not np.isfinite(s) or s <= 0.0 for s in spacing):
            raise ValueError(f"spacing must be three finite positives, got {self.spacing}")
        if any(not np.isfinite(o) for o in origin):
            raise ValueError(f"origin must be finite, got {self.origin}")
        src = np.asarray(self.values)
        values = np.ascontiguousarray(src, dtype=HU_DTYPE).ravel()
        if values.flags.writeable and np.shares_memory(values, src):
            values = values.copy()  # never freeze the caller's buffer
        n = dims[0] * dims[1] * dims[2]
        if values.size != n:
            raise ValueError(
                f"values length {values.size} does not match dims product {n}"
            )
        if values.flags.writeable:
            values.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "values", values)

    @property
    def shape_zyx(self) -> tuple[int, int, int]:
        nx, ny, nz = self.dims
        return (nz, ny, nx)

    def as_array(self) -> np.ndarray:
        """View of the values as a (nz, ny, nx) array (x-fastest memory)."""
        return self.values.reshape(self.shape_zyx)

    def extent(self) -> tuple[float, float, float]:
        """Physical size of the box in mm per axis."""
        return tuple(d * s for d, s in zip(self.dims, self.spacing))

    def flat_index(self, i: int, j: int, k: int) -> int:
        nx, ny, nz = self.dims
        if not (0 <= i < nx and 0 <= j < ny and 0 <= k < nz):
            raise IndexError(f"voxel index {(i, j, k)} outside dims {self.dims}")
        return i + nx * (j + ny * k)


@dataclass(frozen=True)
class IndicatorField:
    """Two-valued stiffness indicator: 1 where HU >= threshold, epsilon elsewhere."""

    grid: VoxelGrid
    threshold: int
    epsilon: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        object.__setattr__(self, "threshold", int(self.threshold))

    def material_mask(self) -> np.ndarray:
        """Boolean flat array, True on material voxels."""
        return self.grid.values >= self.threshold

    def values_flat(self) -> np.ndarray:
        """Flat float64 array of indicator values (1.0 or epsilon)."""
        return np.where(self.material_mask(), 1.0, self.epsilon)


def indicator(field: IndicatorField, voxel_index: tuple[int, int, int]) -> float:
    """Indicator value at one voxel: 1.0 if HU >= threshold (equality counts), else epsilon."""
    flat = field.grid.flat_index(*voxel_index)
    return 1.0 if field.grid.values[flat] >= field.threshold else field.epsilon


def porosity(grid: VoxelGrid, threshold: int) -> float:
    """Void volume fraction: 1 - (material voxel count) / (total voxels).

    A pure counting statistic; invariant under permutations of the values.
    """
    material = int(np.count_nonzero(grid.values >= int(threshold)))
    return 1.0 - material / grid.values.size


def downsample(grid: VoxelGrid, factor: int) -> VoxelGrid:
    """Block-average the grid by an integer factor.

    Each output voxel is the arithmetic mean of its factor^3 block rounded to
    the nearest integer HU; trailing partial blocks are truncated (padding
    would invent material at the boundary). Spacing grows by the factor.
    """
    factor = int(factor)
    if factor < 2:
        raise ValueError(f"downsample factor must be >= 2, got {factor}")
    nx, ny, nz = grid.dims
    mx, my, mz = nx // factor, ny // factor, nz // factor
    if min(mx, my, mz) < 1:
        raise ValueError(f"factor {factor} leaves no voxels for dims {grid.dims}")
    arr = grid.as_array()[: mz * factor, : my * factor, : mx * factor]
    blocks = arr.reshape(mz, factor, my, factor, mx, factor)
    means = blocks.astype(np.float64).mean(axis=(1, 3, 5))
    out = np.rint(means).astype(HU_DTYPE)
    return VoxelGrid(
        dims=(mx, my, mz),
        spacing=tuple(s * factor for s in grid.spacing),
        origin=grid.origin,
        values=out.ravel(),
    )


# --- CVOL file format -------------------------------------------------------
#
# ASCII header, LF line endings:
#     CVOL 1
#     dims nx ny nz
#     spacing sx sy sz        (mm, decimal)
#     origin ox oy oz         (mm, decimal)
#     data uint16-le
#     <blank line>
# followed by nx*ny*nz little-endian uint16 values, x-fastest.

_CVOL_MAGIC = b"CVOL 1"


def _fmt_floats(vals) -> str:
    # repr() of a Python float is the shortest string that round-trips exactly
    return " ".join(repr(float(v)) for v in vals)


def write_volume(grid: VoxelGrid, path) -> None:
    """Write a grid as a CVOL file; write then read is a bit-exact identity."""
    header = (
        "CVOL 1\n"
        f"dims {grid.dims[0]} {grid.dims[1]} {grid.dims[2]}\n"
        f"spacing {_fmt_floats(grid.spacing)}\n"
        f"origin {_fmt_floats(grid.origin)}\n"
        "data uint16-le\n"
        "\n"
    )
    payload = grid.values.astype("<u2", copy=False)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(payload.tobytes())


def _header_line(fh: io.BufferedReader, what: str) -> str:
    raw = fh.readline(4096)
    if not raw.endswith(b"\n"):
        raise VolumeFormatError(f"truncated header while reading {what}")
    try:
        return raw[:-1].decode("ascii")
    except UnicodeDecodeError as exc:
        raise VolumeFormatError(f"non-ASCII bytes in {what}") from exc


def _parse_triple(line: str, key: str, conv):
    parts = line.split()
    if len(parts) != 4 or parts[0] != key:
        raise VolumeFormatError(f"bad {key} line: {line!r}")
    try:
        return tuple(conv(p) for p in parts[1:])
    except ValueError as exc:
        raise VolumeFormatError(f"bad {key} value in line: {line!r}") from exc


def read_volume(path) -> VoxelGrid:
    """Read a CVOL file written by :func:`write_volume`."""
    with open(path, "rb") as fh:
        if _header_line(fh, "magic") != "CVOL 1":
            raise VolumeFormatError("missing 'CVOL 1' magic line")
        dims = _parse_triple(_header_line(fh, "dims"), "dims", int)
        if any(d < 1 for d in dims):
            raise VolumeFormatError(f"dims must be >= 1, got {dims}")
        spacing = _parse_triple(_header_line(fh, "spacing"), "spacing", float)
        if any(not np.isfinite(s) or s <= 0.0 for s in spacing):
            raise VolumeFormatError(f"spacing must be finite and positive, got {spacing}")
        origin = _parse_triple(_header_line(fh, "origin"), "origin", float)
        if any(not np.isfinite(o) for o in origin):
            raise VolumeFormatError(f"origin must be finite, got {origin}")
        data_line = _header_line(fh, "data")
        if data_line != "data uint16-le":
            raise VolumeFormatError(f"bad data line: {data_line!r}")
        if _header_line(fh, "blank separator") != "":
            raise VolumeFormatError("missing blank line after header")
        n = dims[0] * dims[1] * dims[2]
        payload = fh.read(2 * n)
        if len(payload) != 2 * n:
            raise VolumeFormatError(
                f"payload holds {len(payload) // 2} values, dims require {n}"
            )
        if fh.read(1):
            raise VolumeFormatError("trailing bytes after payload")
    values = np.frombuffer(payload, dtype="<u2").astype(HU_DTYPE)
    return VoxelGrid(dims=dims, spacing=spacing, origin=origin, values=values)
