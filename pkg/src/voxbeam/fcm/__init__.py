"""Finite cell discretization of voxel-immersed linear elasticity.

A structured grid of high-order hexahedral cells overlays the voxel grid.
Each cell carries a tensor-product hierarchic basis (hat functions plus
integrated Legendre bubbles); each cell covers an integer block of voxels
whose stiffness blocks are pre-integrated once and scaled per voxel by the
two-valued material indicator during assembly. Dirichlet data enters through
penalty surface terms, tractions through Neumann surface terms.
"""

from .basis import shape_functions_1d, gauss_rule
from .material import ElasticMaterial
from .mesh import FcmMesh
from .bc import Box, BoundaryCondition, ConfigurationError
from .templates import voxel_stiffness_template, voxel_load_template
from .assembly import SparseSystem, assemble, default_penalty, material_face_area
from .evaluate import (
    evaluate_displacement,
    evaluate_von_mises,
    face_mean_displacement,
    interpolate_linear_field,
    penalty_reaction,
)

__all__ = [
    "shape_functions_1d",
    "gauss_rule",
    "ElasticMaterial",
    "FcmMesh",
    "Box",
    "BoundaryCondition",
    "ConfigurationError",
    "voxel_stiffness_template",
    "voxel_load_template",
    "SparseSystem",
    "assemble",
    "default_penalty",
    "material_face_area",
    "evaluate_displacement",
    "evaluate_von_mises",
    "face_mean_displacement",
    "interpolate_linear_field",
    "penalty_reaction",
]
