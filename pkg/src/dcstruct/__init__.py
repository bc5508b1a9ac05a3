"""Discrete conformal structures on closed triangulated surfaces."""

from .curvature import CurvatureField, curvature_jacobian, gauss_bonnet_residual, vertex_curvature
from .energy import calabi_energy, ricci_energy, target_potential, triangle_energy
from .errors import *  # noqa: F401,F403
from .state import EUCLIDEAN, HYPERBOLIC, ConformalState
from .surface import (TriangulatedSurface, build_surface, euler_characteristic, icosahedron,
                      octahedron, tetrahedron, torus_grid)
from .weights import ConditionReport, WeightScheme, uniform_scheme, validate_scheme

__version__ = "0.1.0"
