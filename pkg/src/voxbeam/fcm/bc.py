"""Boundary condition descriptions for the extended-domain outer surface."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_COMPONENTS = {"x": 0, "y": 1, "z": 2}


class ConfigurationError(Exception):
    """A boundary condition or scenario that cannot be realized on this mesh."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in world mm; selects boundary faces it intersects."""

    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"box lo {lo} exceeds hi {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class BoundaryCondition:
    """Penalty-Dirichlet or Neumann-traction data on a boundary region.

    components: subset of "xyz" the condition acts on.
    value: scalar applied to every listed component, a length-3 vector, or a
        callable(points (n,3)) -> (n,3) for spatially varying data.
    penalty: Dirichlet weight; None picks the assembly default.
    material_only: restrict the region to surface voxels that are material,
        so loads and supports never act on the fictitious void skin.
    """

    kind: str
    region: Box
    components: str = "xyz"
    value: object = 0.0
    penalty: float | None = None
    material_only: bool = False

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann"):
            raise ValueError(f"kind must be 'dirichlet' or 'neumann', got {self.kind!r}")
        comps = "".join(sorted(set(self.components), key="xyz".index))
        if not comps or any(c not in _COMPONENTS for c in comps):
            raise ValueError(f"components must be a non-empty subset of 'xyz', got {self.components!r}")
        if self.penalty is not None and self.penalty <= 0.0:
            raise ValueError(f"penalty must be positive, got {self.penalty}")
        object.__setattr__(self, "components", comps)

    def component_indices(self) -> list[int]:
        return [_COMPONENTS[c] for c in self.components]

    def value_at(self, points: np.ndarray) -> np.ndarray:
        """(n, 3) prescribed vector at points; unlisted components are zero."""
        pts = np.atleast_2d(points)
        if callable(self.value):
            out = np.asarray(self.value(pts), dtype=np.float64)
            if out.shape != (pts.shape[0], 3):
                raise ValueError(
                    f"boundary value callable returned shape {out.shape}, expected {(pts.shape[0], 3)}"
                )
            return out
        out = np.zeros((pts.shape[0], 3))
        val = np.asarray(self.value, dtype=np.float64)
        if val.ndim == 0:
            for c in self.component_indices():
                out[:, c] = float(val)
        elif val.shape == (3,):
            for c in self.component_indices():
                out[:, c] = val[c]
        else:
            raise ValueError(f"boundary value must be scalar, length-3, or callable, got {self.value!r}")
        return out
