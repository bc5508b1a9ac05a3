"""Vertex curvature and its Jacobian assembled from the face kernels."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFace, ExtendedNotDifferentiable
from .state import EUCLIDEAN, kernels

__all__ = [
    "CurvatureField",
    "face_angles",
    "vertex_curvature",
    "gauss_bonnet_residual",
    "curvature_jacobian",
    "extended_curvature_jacobian",
    "total_area",
]

SPARSE_THRESHOLD = 2000


@dataclass
class CurvatureField:
    values: np.ndarray
    extended: bool
    background: str = EUCLIDEAN

    def __len__(self):
        return len(self.values)


def face_angles(surface, scheme, state, extended=False):
    """(F, 3) corner angles and the boolean (F,) degeneracy mask."""
    eps, eta = scheme.face_arrays(surface)
    kern = kernels(state.background)
    f = state.f[surface.faces]
    degenerate = ~(kern.q(f, eps, eta) > 0)
    if extended:
        return kern.extended_angles(f, eps, eta), degenerate
    if degenerate.any():
        fid = int(np.argmax(degenerate))
        raise DegenerateFace(fid, f"Q <= 0 at vertices {tuple(int(v) for v in surface.faces[fid])}")
    return kern.angles(f, eps, eta), degenerate


def _accumulate(surface, per_corner):
    # bincount sums in index order, so the reduction is deterministic
    return np.bincount(surface.faces.ravel(), weights=per_corner.ravel(),
                       minlength=surface.vertex_count)


def vertex_curvature(surface, scheme, state, extended=False):
    th, degenerate = face_angles(surface, scheme, state, extended)
    K = 2.0 * math.pi - _accumulate(surface, th)
    return CurvatureField(K, bool(extended and degenerate.any()), state.background)


def total_area(surface, scheme, state):
    """Sum of face areas pi - sum(theta) (hyperbolic) ; zero in Euclidean mode."""
    th, _ = face_angles(surface, scheme, state, extended=False)
    if state.background == EUCLIDEAN:
        return 0.0
    return float(np.sum(math.pi - th.sum(axis=1)))


def gauss_bonnet_residual(field, surface):
    return float(np.sum(field.values) - 2.0 * math.pi * surface.euler_characteristic)


def _face_jacobians(surface, scheme, state):
    eps, eta = scheme.face_arrays(surface)
    kern = kernels(state.background)
    f = state.f[surface.faces]
    J = kern.jacobian(f, eps, eta)
    degenerate = ~(kern.q(f, eps, eta) > 0)
    return J, degenerate


def _assemble(surface, J, sparse):
    n = surface.vertex_count
    rows = np.repeat(surface.faces, 3, axis=1).ravel()
    cols = np.tile(surface.faces, (1, 3)).ravel()
    vals = -J.reshape(len(J), 9).ravel()
    if sparse is None:
        sparse = n > SPARSE_THRESHOLD
    if sparse:
        from scipy.sparse import coo_matrix
        return coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    out = np.zeros(n * n)
    np.add.at(out, rows * n + cols, vals)
    return out.reshape(n, n)


def curvature_jacobian(surface, scheme, state, extended=False, sparse=None):
    """Lambda = dK/du = minus the sum of face Jacobians scattered to vertices."""
    if extended:
        raise ExtendedNotDifferentiable(
            "extended curvature is not differentiable across degenerate-region boundaries")
    J, degenerate = _face_jacobians(surface, scheme, state)
    if degenerate.any():
        fid = int(np.argmax(degenerate))
        raise DegenerateFace(fid, f"Q <= 0 at vertices {tuple(int(v) for v in surface.faces[fid])}")
    return _assemble(surface, J, sparse)


def extended_curvature_jacobian(surface, scheme, state, sparse=None):
    """Jacobian of the extended curvature away from region boundaries.

    Extended angles are constant on degenerate faces, so those faces
    contribute nothing.  Used for implicit integration only.
    """
    J, degenerate = _face_jacobians(surface, scheme, state)
    J = np.where(degenerate[:, None, None], 0.0, J)
    return _assemble(surface, J, sparse)
