"""Per-voxel pre-integrated stiffness and load blocks of the reference cell.

On a uniform grid every cell has identical geometry, so the exact stiffness
contribution of the voxel at slot (a, b, c) inside a cell depends only on the
slot, not on the cell. Assembly then reduces to scaling these templates by
each voxel's indicator value and scattering. Each voxel is integrated with
the full (p+1)^3 Gauss rule, which is exact for the polynomial integrand, so
the sum of all slots reproduces one-shot cell quadrature to round-off.
"""

from __future__ import annotations

import numpy as np

from .basis import gauss_rule, shape_functions_1d
from .material import ElasticMaterial

# Voigt strain order (xx, yy, zz, yz, xz, xy), engineering shear.


def _axis_eval(p: int, m: int, half_width: float):
    """Gauss data for every voxel slot along one axis of the reference cell.

    Returns (points, weights, values, derivs): points/weights per slot of
    shape (m, p+1), basis tables of shape (m, p+1 modes, p+1 points).
    """
    g, w = gauss_rule(p + 1)
    pts = np.empty((m, p + 1))
    wts = np.empty((m, p + 1))
    vals = np.empty((m, p + 1, p + 1))
    ders = np.empty((m, p + 1, p + 1))
    for s in range(m):
        lo = -1.0 + 2.0 * s / m
        hi = -1.0 + 2.0 * (s + 1) / m
        pts[s] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g
        wts[s] = 0.5 * (hi - lo) * w
        v, d = shape_functions_1d(p, pts[s])
        vals[s] = v
        ders[s] = d / half_width  # derivative w.r.t. world coordinate
    return pts, wts, vals, ders


def _point_tables(order, voxels_per_cell, cell_size_mm):
    p = int(order)
    m = tuple(int(v) for v in np.broadcast_to(voxels_per_cell, (3,)))
    h = tuple(float(c) for c in np.broadcast_to(cell_size_mm, (3,)))
    axes = [_axis_eval(p, m[a], h[a] / 2.0) for a in range(3)]
    detj = (h[0] / 2.0) * (h[1] / 2.0) * (h[2] / 2.0)
    return p, m, axes, detj


def _slot_quadrature(p, axes, detj, sx, sy, sz):
    """Flattened Gauss data of one voxel slot: weights (q,), scalar basis
    values (q, n) and world gradients (q, 3, n), n = (p+1)^3, q = (p+1)^3."""
    n1 = p + 1
    (_, wx, vx, dx), (_, wy, vy, dy), (_, wz, vz, dz) = axes
    w = (
        wz[sz][:, None, None] * wy[sy][None, :, None] * wx[sx][None, None, :]
    ).ravel() * detj
    # scalar index a = ax + n1*(ay + n1*az); point index q = qx + n1*(qy + n1*qz)
    def outer3(az_tab, ay_tab, ax_tab):
        t = (
            az_tab[:, None, None, :, None, None]
            * ay_tab[None, :, None, None, :, None]
            * ax_tab[None, None, :, None, None, :]
        )
        # axes: (az, ay, ax, qz, qy, qx) -> (q, a)
        return t.transpose(3, 4, 5, 0, 1, 2).reshape(n1 ** 3, n1 ** 3)

    vals = outer3(vz[sz], vy[sy], vx[sx])
    grads = np.stack(
        [
            outer3(vz[sz], vy[sy], dx[sx]),
            outer3(vz[sz], dy[sy], vx[sx]),
            outer3(dz[sz], vy[sy], vx[sx]),
        ],
        axis=1,
    )  # (q, 3, n)
    return w, vals, grads


def _strain_matrix(grads: np.ndarray) -> np.ndarray:
    """B blocks (q, 6, 3n) from gradients (q, 3, n); columns 3a + comp."""
    q, _, n = grads.shape
    b = np.zeros((q, 6, 3 * n))
    gx, gy, gz = grads[:, 0, :], grads[:, 1, :], grads[:, 2, :]
    b[:, 0, 0::3] = gx
    b[:, 1, 1::3] = gy
    b[:, 2, 2::3] = gz
    b[:, 3, 1::3] = gz
    b[:, 3, 2::3] = gy
    b[:, 4, 0::3] = gz
    b[:, 4, 2::3] = gx
    b[:, 5, 0::3] = gy
    b[:, 5, 1::3] = gx
    return b


def voxel_stiffness_template(
    order: int, voxels_per_cell, cell_size_mm, material: ElasticMaterial
) -> np.ndarray:
    """Exact unscaled stiffness block of every voxel slot in the reference cell.

    Returns (mx*my*mz, 3n, 3n) with slot flat index sx + mx*(sy + my*sz) and
    n = (p+1)^3 scalar modes. Blocks are exactly symmetric.
    """
    p, m, axes, detj = _point_tables(order, voxels_per_cell, cell_size_mm)
    c6 = material.elasticity_matrix()
    n3 = 3 * (p + 1) ** 3
    out = np.empty((m[0] * m[1] * m[2], n3, n3))
    for sz in range(m[2]):
        for sy in range(m[1]):
            for sx in range(m[0]):
                w, _, grads = _slot_quadrature(p, axes, detj, sx, sy, sz)
                b = _strain_matrix(grads)
                k = np.einsum("q,qim,ij,qjn->mn", w, b, c6, b, optimize=True)
                out[sx + m[0] * (sy + m[1] * sz)] = 0.5 * (k + k.T)
    return out


def voxel_load_template(order: int, voxels_per_cell, cell_size_mm) -> np.ndarray:
    """Integrals of the scalar basis over each voxel slot, shape (m_total, n)."""
    p, m, axes, detj = _point_tables(order, voxels_per_cell, cell_size_mm)
    n = (p + 1) ** 3
    out = np.empty((m[0] * m[1] * m[2], n))
    for sz in range(m[2]):
        for sy in range(m[1]):
            for sx in range(m[0]):
                w, vals, _ = _slot_quadrature(p, axes, detj, sx, sy, sz)
                out[sx + m[0] * (sy + m[1] * sz)] = w @ vals
    return out
