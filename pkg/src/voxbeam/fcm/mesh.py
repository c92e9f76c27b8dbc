"""Structured cell grid over a voxel grid, with global dof numbering.

The global scalar basis of a structured grid of tensor-product cells is
itself a tensor product of 1D bases: along an axis with n cells of order p
there are n*p + 1 global 1D functions (vertices at multiples of p, bubbles
in between). A scalar 3D function is a triple of 1D indices, so continuity
across shared faces/edges/vertices falls out of the numbering with no
bookkeeping. Displacement components are interleaved: dof = 3*scalar + comp.
"""

from __future__ import annotations

import numpy as np

from ..voxel import HU_DTYPE, VoxelGrid


def _axis_mode_map(n_cells: int, p: int) -> np.ndarray:
    """(n_cells, p+1) int32: global 1D index of local mode m in cell c."""
    out = np.empty((n_cells, p + 1), dtype=np.int32)
    for c in range(n_cells):
        out[c, 0] = c * p
        out[c, 1] = (c + 1) * p
        for m in range(2, p + 1):
            out[c, m] = c * p + (m - 1)
    return out


class FcmMesh:
    """Immutable discretization: cells x voxels-per-cell covering the grid."""

    def __init__(self, grid: VoxelGrid, order: int, voxels_per_cell):
        p = int(order)
        if p < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        vpc = tuple(int(m) for m in np.broadcast_to(voxels_per_cell, (3,)))
        if any(m < 1 for m in vpc):
            raise ValueError(f"voxels_per_cell must be >= 1, got {voxels_per_cell}")
        if any(d % m for d, m in zip(grid.dims, vpc)):
            raise ValueError(
                f"grid dims {grid.dims} not divisible by voxels_per_cell {vpc}; "
                "use FcmMesh.from_grid to zero-pad with void"
            )
        self.grid = grid
        self.order = p
        self.voxels_per_cell = vpc
        self.cell_counts = tuple(d // m for d, m in zip(grid.dims, vpc))
        self.cell_size = tuple(m * s for m, s in zip(vpc, grid.spacing))
        self.origin = grid.origin
        self._axis_maps = tuple(
            _axis_mode_map(n, p) for n in self.cell_counts
        )
        self.scalar_dims = tuple(n * p + 1 for n in self.cell_counts)
        self.n_scalar = int(np.prod(self.scalar_dims))
        self.n_dofs = 3 * self.n_scalar
        self.n_cells = int(np.prod(self.cell_counts))

    @classmethod
    def from_grid(cls, grid: VoxelGrid, order: int, voxels_per_cell) -> "FcmMesh":
        """Build a mesh, zero-padding the grid with void voxels on the high
        side when the dims do not divide (void padding cannot stiffen)."""
        vpc = tuple(int(m) for m in np.broadcast_to(voxels_per_cell, (3,)))
        pad = tuple((-d) % m for d, m in zip(grid.dims, vpc))
        if any(pad):
            arr = grid.as_array()
            padded = np.zeros(
                (arr.shape[0] + pad[2], arr.shape[1] + pad[1], arr.shape[2] + pad[0]),
                dtype=HU_DTYPE,
            )
            padded[: arr.shape[0], : arr.shape[1], : arr.shape[2]] = arr
            grid = VoxelGrid(
                dims=tuple(d + q for d, q in zip(grid.dims, pad)),
                spacing=grid.spacing,
                origin=grid.origin,
                values=padded.ravel(),
            )
        return cls(grid, order, vpc)

    # --- geometry -----------------------------------------------------------

    def domain_box(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array(self.origin)
        hi = lo + np.array(self.cell_counts) * np.array(self.cell_size)
        return lo, hi

    def cell_box(self, cx: int, cy: int, cz: int) -> tuple[np.ndarray, np.ndarray]:
        h = np.array(self.cell_size)
        lo = np.array(self.origin) + np.array([cx, cy, cz]) * h
        return lo, lo + h

    def locate(self, points: np.ndarray, tol: float = 1e-9):
        """Containing cell indices and local coordinates for world points.

        Returns (cells (n,3) int, xi (n,3) in [-1,1]); raises ValueError for
        points outside the extended domain.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        lo, hi = self.domain_box()
        h = np.array(self.cell_size)
        slack = tol * np.maximum(hi - lo, 1.0)
        if np.any(pts < lo - slack) or np.any(pts > hi + slack):
            bad = pts[np.any((pts < lo - slack) | (pts > hi + slack), axis=1)][0]
            raise ValueError(f"point {bad} outside extended domain [{lo}, {hi}]")
        rel = (pts - lo) / h
        cells = np.clip(np.floor(rel).astype(np.int64), 0, np.array(self.cell_counts) - 1)
        xi = np.clip(2.0 * (rel - cells) - 1.0, -1.0, 1.0)
        return cells.astype(np.int32), xi

    # --- dof numbering ------------------------------------------------------

    def cell_dof_matrix(self, flat_cells: np.ndarray) -> np.ndarray:
        """(B, 3*(p+1)^3) int32 global dof ids, local layout 3*a + comp with
        scalar index a = ax + (p+1)*(ay + (p+1)*az)."""
        ncx, ncy, _ = self.cell_counts
        flat = np.asarray(flat_cells, dtype=np.int64).ravel()
        cx = flat % ncx
        cy = (flat // ncx) % ncy
        cz = flat // (ncx * ncy)
        gx = self._axis_maps[0][cx].astype(np.int64)  # (B, p+1)
        gy = self._axis_maps[1][cy].astype(np.int64)
        gz = self._axis_maps[2][cz].astype(np.int64)
        nx, ny, _ = self.scalar_dims
        scalar = (
            gz[:, :, None, None] * (nx * ny)
            + gy[:, None, :, None] * nx
            + gx[:, None, None, :]
        ).reshape(flat.size, -1)
        dofs = (3 * scalar[:, :, None] + np.arange(3)).reshape(flat.size, -1)
        return dofs.astype(np.int32)

    def cell_dofs(self, cx: int, cy: int, cz: int) -> np.ndarray:
        ncx, ncy, _ = self.cell_counts
        flat = cx + ncx * (cy + ncy * cz)
        return self.cell_dof_matrix(np.array([flat]))[0]

    def flat_cell(self, cx, cy, cz):
        ncx, ncy, _ = self.cell_counts
        return cx + ncx * (cy + ncy * cz)

    def vertex_scalar_index(self, i: int, j: int, k: int) -> int:
        """Global scalar index of the vertex at cell-grid node (i, j, k)."""
        p = self.order
        nx, ny, _ = self.scalar_dims
        return (i * p) + nx * ((j * p) + ny * (k * p))

    def vertex_position(self, i: int, j: int, k: int) -> np.ndarray:
        return np.array(self.origin) + np.array([i, j, k]) * np.array(self.cell_size)
