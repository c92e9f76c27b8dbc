"""Synthetic octet-truss lattice beams on voxel grids.

The unit cell combines an inner octahedron (vertices at the six face centers
of the cube, 12 edges) with 24 half face-diagonals running from cube corners
to face centers. Struts are capsules: cylinders of radius strut_diameter/2
with hemispherical caps, so junctions are unions of smooth solids and no
sliver artifacts appear where struts meet.

Voxelization is pure point membership of voxel centers in the capsule union
(binary HU output, no anti-aliasing). All membership arithmetic runs in voxel
units so that mirrored grids voxelize to exactly mirrored grids when the
dimensions are even.

`inject_defects` emulates the usual SLM artifacts geometrically: uniformly
thicker struts, excess material blobs at the junctions, and powder particles
stuck to down-skin surfaces. Magnitudes are caller choices; all stages only
ever add material.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .voxel import HU_DTYPE, VoxelGrid

_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class OctetCellSpec:
    """Geometry and HU labels of one octet-truss unit cell."""

    cell_size: float = 4.0
    strut_diameter: float = 0.8
    material_hu: int = 1000
    void_hu: int = 0

    def __post_init__(self):
        if not (0.0 < self.strut_diameter < self.cell_size):
            raise ValueError(
                f"strut_diameter must lie in (0, cell_size), got "
                f"{self.strut_diameter} for cell_size {self.cell_size}"
            )
        if not self.material_hu > self.void_hu:
            raise ValueError("material_hu must exceed void_hu")


@dataclass(frozen=True)
class LatticeBeamSpec:
    """A beam tiled from whole octet cells: (n_width, n_length, n_height) cells."""

    cells: tuple[int, int, int]
    cell: OctetCellSpec
    resolution: float

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        if len(cells) != 3 or any(c < 1 for c in cells):
            raise ValueError(f"cell counts must be three integers >= 1, got {self.cells}")
        if not (0.0 < self.resolution <= self.cell.strut_diameter / 2.0):
            raise ValueError(
                f"resolution must be positive and <= strut_diameter/2 "
                f"(at least two voxels across a strut), got {self.resolution}"
            )
        object.__setattr__(self, "cells", cells)


@dataclass(frozen=True)
class DefectSpec:
    """Parametric SLM-like geometric defects; all-zero spec is the identity."""

    strut_dilation: float = 0.0
    node_blob_radius: float = 0.0
    particle_density: float = 0.0
    particle_radius: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("strut_dilation", "node_blob_radius", "particle_density", "particle_radius"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")

    def is_identity(self) -> bool:
        return (
            self.strut_dilation == 0.0
            and self.node_blob_radius == 0.0
            and (self.particle_density == 0.0 or self.particle_radius == 0.0)
        )


def octet_cell_struts(spec: OctetCellSpec) -> np.ndarray:
    """Strut segments of one octet cell, shape (36, 2, 3), cell-local mm.

    12 octahedron edges between face centers of adjacent faces plus 24
    corner-to-face-center half diagonals (4 per cube face). The segment set
    is invariant under the full cube symmetry group.
    """
    a = spec.cell_size
    h = 0.5 * a
    face_centers = []  # (axis, side, point)
    for axis in range(3):
        for side in (0.0, a):
            p = np.full(3, h)
            p[axis] = side
            face_centers.append((axis, p))

    segments = []
    # octahedron edges: face centers on non-opposite faces
    for i in range(6):
        ax_i, p_i = face_centers[i]
        for j in range(i + 1, 6):
            ax_j, p_j = face_centers[j]
            if ax_i != ax_j:
                segments.append((p_i, p_j))
    # half face-diagonals: every face center to the 4 corners of its face
    for axis, p in face_centers:
        other = [k for k in range(3) if k != axis]
        for s0 in (0.0, a):
            for s1 in (0.0, a):
                corner = p.copy()
                corner[other[0]] = s0
                corner[other[1]] = s1
                segments.append((corner, p))
    return np.array(segments, dtype=np.float64)


def lattice_junctions(spec: LatticeBeamSpec) -> np.ndarray:
    """World-mm coordinates of all strut junctions: cell corners and face centers."""
    a = spec.cell.cell_size
    nx, ny, nz = spec.cells
    pts = set()
    for cx in range(nx):
        for cy in range(ny):
            for cz in range(nz):
                base = np.array([cx, cy, cz], dtype=np.float64) * a
                for p0, p1 in octet_cell_struts(spec.cell):
                    pts.add(tuple(base + p0))
                    pts.add(tuple(base + p1))
    return np.array(sorted(pts), dtype=np.float64)


def _segment_mask(centers_x, centers_y, centers_z, p0, p1, radius):
    """Boolean (nz, ny, nx) mask of centers within radius of segment p0-p1."""
    d = p1 - p0
    len2 = float(d @ d)
    rx = centers_x[None, None, :] - p0[0]
    ry = centers_y[None, :, None] - p0[1]
    rz = centers_z[:, None, None] - p0[2]
    if len2 == 0.0:
        dist2 = rx * rx + ry * ry + rz * rz
    else:
        t = (rx * d[0] + ry * d[1] + rz * d[2]) / len2
        np.clip(t, 0.0, 1.0, out=t)
        qx = rx - t * d[0]
        qy = ry - t * d[1]
        qz = rz - t * d[2]
        dist2 = qx * qx + qy * qy + qz * qz
    return dist2 <= radius * radius


def _paint_segments(mask, segments_vox, radius_vox):
    """OR capsule membership into mask; coordinates are in voxel units."""
    nz, ny, nx = mask.shape
    for p0, p1 in segments_vox:
        lo = np.minimum(p0, p1) - radius_vox
        hi = np.maximum(p0, p1) + radius_vox
        # voxel i has center i + 0.5; overlap window clipped to the grid
        i0 = np.maximum(np.floor(lo - 0.5).astype(int), 0)
        i1 = np.minimum(np.ceil(hi - 0.5).astype(int) + 1, [nx, ny, nz])
        if np.any(i0 >= i1):
            continue
        cx = np.arange(i0[0], i1[0], dtype=np.float64) + 0.5
        cy = np.arange(i0[1], i1[1], dtype=np.float64) + 0.5
        cz = np.arange(i0[2], i1[2], dtype=np.float64) + 0.5
        sub = _segment_mask(cx, cy, cz, p0, p1, radius_vox)
        mask[i0[2]:i1[2], i0[1]:i1[1], i0[0]:i1[0]] |= sub


def _voxelize_tiled(spec: LatticeBeamSpec, v: int) -> np.ndarray:
    """Fast path when cell_size is an exact multiple of the resolution.

    The membership pattern of a cell block depends only on which of its 26
    neighbours exist, so precompute per-neighbour-offset contributions once
    and OR them per presence class (at most 27 classes over the whole beam).
    """
    cell = spec.cell
    frac = octet_cell_struts(cell) / cell.cell_size  # exact multiples of 0.5
    radius_vox = 0.5 * cell.strut_diameter * v / cell.cell_size

    offsets = [(ox, oy, oz) for ox in (-1, 0, 1) for oy in (-1, 0, 1) for oz in (-1, 0, 1)]
    contrib = {}
    for off in offsets:
        segs = (frac + np.array(off, dtype=np.float64)) * v
        pat = np.zeros((v, v, v), dtype=bool)
        _paint_segments(pat, segs, radius_vox)
        contrib[off] = pat

    def axis_classes(n):
        # per cell index: (has minus neighbour, has plus neighbour)
        return [(c > 0, c < n - 1) for c in range(n)]

    ncx, ncy, ncz = spec.cells
    cls_x, cls_y, cls_z = axis_classes(ncx), axis_classes(ncy), axis_classes(ncz)

    combined = {}

    def pattern_for(key):
        if key not in combined:
            pat = np.zeros((v, v, v), dtype=bool)
            for off in offsets:
                ok = True
                for axis in range(3):
                    o = off[axis]
                    has_minus, has_plus = key[axis]
                    if (o == -1 and not has_minus) or (o == 1 and not has_plus):
                        ok = False
                        break
                if ok:
                    pat |= contrib[off]
            combined[key] = pat
        return combined[key]

    out = np.zeros((ncz * v, ncy * v, ncx * v), dtype=bool)
    for cz in range(ncz):
        for cy in range(ncy):
            for cx in range(ncx):
                key = (cls_x[cx], cls_y[cy], cls_z[cz])
                pat = pattern_for(key)
                out[cz * v:(cz + 1) * v, cy * v:(cy + 1) * v, cx * v:(cx + 1) * v] = pat
    return out


def _voxelize_direct(spec: LatticeBeamSpec, dims) -> np.ndarray:
    cell = spec.cell
    scale = cell.cell_size / spec.resolution  # voxels per cell edge, not integer here
    frac = octet_cell_struts(cell) / cell.cell_size
    radius_vox = 0.5 * cell.strut_diameter / spec.resolution
    nx, ny, nz = dims
    mask = np.zeros((nz, ny, nx), dtype=bool)
    ncx, ncy, ncz = spec.cells
    for cz in range(ncz):
        for cy in range(ncy):
            for cx in range(ncx):
                base = np.array([cx, cy, cz], dtype=np.float64)
                segs = (frac + base) * scale
                _paint_segments(mask, segs, radius_vox)
    return mask


def voxelize_beam(spec: LatticeBeamSpec) -> VoxelGrid:
    """Voxelize the tiled beam: material_hu where a voxel center falls inside
    the capsule union, void_hu elsewhere. Deterministic."""
    cell = spec.cell
    extent = np.array(spec.cells, dtype=np.float64) * cell.cell_size
    # guard ceil against float fuzz when resolution divides the extent exactly
    dims = tuple(int(math.ceil(e / spec.resolution - 1e-9)) for e in extent)
    v = cell.cell_size / spec.resolution
    v_int = int(round(v))
    if abs(v - v_int) < 1e-9 * max(v, 1.0) and v_int >= 1:
        mask = _voxelize_tiled(spec, v_int)
    else:
        mask = _voxelize_direct(spec, dims)
    values = np.where(mask, cell.material_hu, cell.void_hu).astype(HU_DTYPE)
    return VoxelGrid(
        dims=dims,
        spacing=(spec.resolution,) * 3,
        values=values.ravel(),
    )


def _paint_spheres(mask, centers_vox, radius_vox):
    nz, ny, nx = mask.shape
    r2 = radius_vox * radius_vox
    for c in centers_vox:
        i0 = np.maximum(np.floor(c - radius_vox - 0.5).astype(int), 0)
        i1 = np.minimum(np.ceil(c + radius_vox - 0.5).astype(int) + 1, [nx, ny, nz])
        if np.any(i0 >= i1):
            continue
        cx = np.arange(i0[0], i1[0], dtype=np.float64) + 0.5 - c[0]
        cy = np.arange(i0[1], i1[1], dtype=np.float64) + 0.5 - c[1]
        cz = np.arange(i0[2], i1[2], dtype=np.float64) + 0.5 - c[2]
        d2 = cz[:, None, None] ** 2 + cy[None, :, None] ** 2 + cx[None, None, :] ** 2
        mask[i0[2]:i1[2], i0[1]:i1[1], i0[0]:i1[0]] |= d2 <= r2
    return mask


def inject_defects(
    grid: VoxelGrid,
    spec: DefectSpec,
    build_direction: str = "z",
    junctions: np.ndarray | None = None,
) -> VoxelGrid:
    """Add SLM-like material defects to a binarized lattice volume.

    Stages run in order: morphological strut dilation (euclidean ball),
    excess-material spheres at strut junctions, then Poisson-sampled powder
    particles on surfaces facing opposite the build direction. Material is
    only ever added, so output porosity <= input porosity. Identical seed and
    spec reproduce the output bit for bit.

    `junctions` are world-mm points (see :func:`lattice_junctions`); required
    when node_blob_radius > 0 since the grid alone cannot locate them.
    """
    if build_direction not in _AXES:
        raise ValueError(f"build_direction must be one of x, y, z, got {build_direction!r}")
    if spec.is_identity():
        return grid

    lo = int(grid.values.min())
    hi = int(grid.values.max())
    material_hu = hi if hi > lo else max(lo, 1)
    void_hu = lo if hi > lo else 0
    mask = (grid.as_array() >= (lo + hi + 1) // 2) if hi > lo else np.ones(grid.shape_zyx, bool)
    mask = mask.copy()
    spacing = np.array(grid.spacing)

    if spec.strut_dilation > 0.0 and mask.any() and not mask.all():
        # distance from void voxel centers to the nearest material center
        dist = ndimage.distance_transform_edt(~mask, sampling=spacing[::-1])
        mask |= dist <= spec.strut_dilation

    if spec.node_blob_radius > 0.0:
        if junctions is None:
            raise ValueError("node_blob_radius > 0 requires junction coordinates")
        centers_vox = (np.asarray(junctions, dtype=np.float64) - np.array(grid.origin)) / spacing
        # spheres in voxel units; assumes isotropic spacing (generator grids are)
        _paint_spheres(mask, centers_vox, spec.node_blob_radius / spacing[0])

    if spec.particle_density > 0.0 and spec.particle_radius > 0.0:
        rng = np.random.default_rng(spec.rng_seed)
        axis = _AXES[build_direction]
        arr_axis = 2 - axis  # mask is (z, y, x)
        below = np.zeros_like(mask)
        sl_dst = [slice(None)] * 3
        sl_src = [slice(None)] * 3
        sl_dst[arr_axis] = slice(1, None)
        sl_src[arr_axis] = slice(None, -1)
        below[tuple(sl_dst)] = mask[tuple(sl_src)]
        down_skin = mask & ~below
        idx = np.argwhere(down_skin)  # (n, 3) in (k, j, i)
        if idx.shape[0] > 0:
            perp = [a for a in range(3) if a != axis]
            face_area = spacing[perp[0]] * spacing[perp[1]]
            expected = spec.particle_density * face_area * idx.shape[0]
            count = min(int(rng.poisson(expected)), idx.shape[0])
            if count > 0:
                chosen = idx[rng.choice(idx.shape[0], size=count, replace=False)]
                centers = chosen[:, ::-1].astype(np.float64) + 0.5  # (i, j, k) voxel units
                centers[:, axis] -= 0.5  # sit on the down-facing face
                _paint_spheres(mask, centers, spec.particle_radius / spacing[0])

    values = np.where(mask, material_hu, void_hu).astype(HU_DTYPE)
    return VoxelGrid(dims=grid.dims, spacing=grid.spacing, origin=grid.origin, values=values.ravel())
