"""Isotropic linear elastic material with fictitious-void scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ElasticMaterial:
    """Bulk elastic constants (MPa) plus the void stiffness scaling epsilon."""

    youngs_modulus: float
    poisson_ratio: float
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.youngs_modulus <= 0.0:
            raise ValueError(f"youngs_modulus must be positive, got {self.youngs_modulus}")
        if not (-1.0 < self.poisson_ratio < 0.5):
            raise ValueError(f"poisson_ratio must lie in (-1, 0.5), got {self.poisson_ratio}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    @property
    def shear_modulus(self) -> float:
        return self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))

    def elasticity_matrix(self) -> np.ndarray:
        """6x6 Voigt matrix, strain order (xx, yy, zz, yz, xz, xy), engineering shear."""
        e, nu = self.youngs_modulus, self.poisson_ratio
        lam = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
        mu = self.shear_modulus
        c = np.zeros((6, 6))
        c[:3, :3] = lam
        c[np.diag_indices(3)] = lam + 2.0 * mu
        c[3, 3] = c[4, 4] = c[5, 5] = mu
        return c
