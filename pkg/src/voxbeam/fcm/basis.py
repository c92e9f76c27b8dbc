"""Hierarchic 1D shape functions: linear hats plus integrated Legendre bubbles.

Mode layout on the reference interval [-1, 1] (0-based index m):
    m = 0:  (1 - xi) / 2              vertex mode at xi = -1
    m = 1:  (1 + xi) / 2              vertex mode at xi = +1
    m >= 2: sqrt((2m-1)/2) * integral of P_{m-1} from -1 to xi

The bubbles vanish at both endpoints, so C0 continuity across cells only
couples the vertex modes. Closed form via the Legendre identity
    int P_n = (P_{n+1} - P_{n-1}) / (2n + 1),
and the derivative of mode m >= 2 is sqrt((2m-1)/2) * P_{m-1}(xi).
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import legendre as npleg

_XI_TOL = 1e-12


def _legendre_table(max_degree: int, xi: np.ndarray) -> np.ndarray:
    """P_0..P_max_degree evaluated at xi, shape (max_degree+1, len(xi))."""
    out = np.empty((max_degree + 1, xi.size))
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = xi
    for n in range(1, max_degree):
        out[n + 1] = ((2 * n + 1) * xi * out[n] - n * out[n - 1]) / (n + 1)
    return out


def shape_functions_1d(order: int, coordinate) -> tuple[np.ndarray, np.ndarray]:
    """Values and analytic derivatives of the p+1 hierarchic modes.

    `coordinate` may be a scalar in [-1, 1] or an array; returns arrays of
    shape (p+1,) or (p+1, n).
    """
    p = int(order)
    if p < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    xi = np.atleast_1d(np.asarray(coordinate, dtype=np.float64))
    if np.any(np.abs(xi) > 1.0 + _XI_TOL):
        raise ValueError(f"coordinate outside [-1, 1]: {coordinate}")
    xi = np.clip(xi, -1.0, 1.0)

    values = np.empty((p + 1, xi.size))
    derivs = np.empty((p + 1, xi.size))
    values[0] = 0.5 * (1.0 - xi)
    values[1] = 0.5 * (1.0 + xi)
    derivs[0] = -0.5
    derivs[1] = 0.5
    if p >= 2:
        P = _legendre_table(p, xi)
        for m in range(2, p + 1):
            norm = np.sqrt((2 * m - 1) / 2.0)
            values[m] = norm * (P[m] - P[m - 2]) / (2 * m - 1)
            derivs[m] = norm * P[m - 1]

    if np.isscalar(coordinate) or np.ndim(coordinate) == 0:
        return values[:, 0], derivs[:, 0]
    return values, derivs


def gauss_rule(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights on [-1, 1]."""
    if n_points < 1:
        raise ValueError(f"need at least one Gauss point, got {n_points}")
    return npleg.leggauss(int(n_points))
