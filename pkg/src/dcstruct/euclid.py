"""Euclidean face kernels.

Local arrays follow the opposite-corner convention of :mod:`dcstruct.weights`:
``l[..., q]`` is the length of the edge opposite corner q.  Kernels take
radii ``r = exp(f)`` and broadcast over leading axes.

The doubled face area ``A = l_ij l_ik sin(theta_i)`` is evaluated as
``r_i r_j r_k sqrt(Q)``, which is exact (Heron's product equals
``4 r_i^2 r_j^2 r_k^2 Q``) and keeps full relative accuracy near degeneracy.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle, NonpositiveRadicand
from .weights import a_local, gamma_local, h_local

__all__ = [
    "EuclideanFaceGeom",
    "edge_length_e",
    "q_value_e",
    "degenerate_interval_e",
    "angles_e",
    "extended_angles_e",
    "jacobian_e",
    "center_data_e",
    "face_geom_e",
    "lengths_local",
    "q_local",
    "thresholds_local",
    "angles_local",
    "extended_angles_local",
    "jacobian_local",
]

BOUNDARY_TOL = 1e-14


def _s(x):
    return np.roll(x, -1, axis=-1)


def _t(x):
    return np.roll(x, -2, axis=-1)


# -- vectorized kernels -----------------------------------------------------

def lengths_local(r, eps, eta):
    r = np.asarray(r, dtype=float)
    rs, rt = _s(r), _t(r)
    rad = _s(eps) * rs * rs + _t(eps) * rt * rt + 2.0 * np.asarray(eta) * rs * rt
    if np.any(rad <= 0):
        raise NonpositiveRadicand("length radicand <= 0; structure condition C1 fails")
    return np.sqrt(rad)


def q_local(r, eps, eta):
    kappa = 1.0 / np.asarray(r, dtype=float)
    gam = gamma_local(eps, eta)
    return (np.sum(-a_local(eps, eta) * kappa * kappa, axis=-1)
            + 2.0 * np.sum(gam * _s(kappa) * _t(kappa), axis=-1))


def _quadratic(r, eps, eta):
    """Coefficients of Q <= 0 read as a quadratic in kappa_q, per corner."""
    kappa = 1.0 / np.asarray(r, dtype=float)
    ks, kt = _s(kappa), _t(kappa)
    gam = gamma_local(eps, eta)
    eps = np.asarray(eps, dtype=float)
    eta = np.asarray(eta, dtype=float)
    A = a_local(eps, eta)
    B = -2.0 * (_t(gam) * ks + _s(gam) * kt)
    # coefficient of kappa_s^2 uses the edge q-t (opposite s), and vice versa
    C = ((_s(eta) ** 2 - eps * _t(eps)) * ks * ks
         + (_t(eta) ** 2 - eps * _s(eps)) * kt * kt
         - 2.0 * ks * kt * gam)
    return A, B, C


def thresholds_local(r, eps, eta):
    """Radius threshold T_q with V_q = {r_q <= T_q}; NaN where A_q <= 0.

    Only the two radii r_s, r_t enter; the value of r_q is ignored.
    """
    A, B, C = _quadratic(r, eps, eta)
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = B * B - 4.0 * A * C
        T = 2.0 * A / (-B + np.sqrt(disc))
    return np.where(A > 0, T, np.nan)


def _angles_from_sq(l, prod4):
    """Angles from opposite lengths and the Heron product 4 A^2 >= 0."""
    ls, lt = _s(l), _t(l)
    two_a = np.sqrt(np.maximum(prod4, 0.0))[..., None]
    return np.arctan2(np.broadcast_to(two_a, l.shape), ls * ls + lt * lt - l * l)


def angles_local(r, eps, eta):
    """Inner angles of nondegenerate faces; NaN rows where Q <= 0."""
    r = np.asarray(r, dtype=float)
    l = lengths_local(r, eps, eta)
    Q = q_local(r, eps, eta)
    rp = np.prod(r, axis=-1)
    th = _angles_from_sq(l, 4.0 * rp * rp * Q)
    return np.where((Q > 0)[..., None], th, np.nan)


def degenerate_corner(r, eps, eta):
    """Index of the corner q with r in V_q, -1 where the face is nondegenerate.

    Membership is decided by the closed-form threshold; when floating point
    puts a Q <= 0 point outside every V_q the corner with the most negative
    h value is used (it is the unique negative one).
    """
    r = np.asarray(r, dtype=float)
    Q = q_local(r, eps, eta)
    T = thresholds_local(r, eps, eta)
    inside = np.nan_to_num(r <= T * (1 + 1e-13), nan=0).astype(bool)
    first = np.where(inside.any(axis=-1), np.argmax(inside, axis=-1), -1)
    h = h_local(1.0 / r, eps, eta)
    fallback = np.argmin(h, axis=-1)
    corner = np.where(first >= 0, first, fallback)
    return np.where(Q > 0, -1, corner)


def extended_angles_local(r, eps, eta):
    r = np.asarray(r, dtype=float)
    l = lengths_local(r, eps, eta)
    Q = q_local(r, eps, eta)
    rp = np.prod(r, axis=-1)
    th = _angles_from_sq(l, 4.0 * rp * rp * Q)
    corner = degenerate_corner(r, eps, eta)
    ext = np.where(np.arange(3) == corner[..., None], math.pi, 0.0)
    return np.where((corner >= 0)[..., None], ext, th)


def jacobian_local(r, eps, eta):
    """d(theta)/d(u) per face, shape (..., 3, 3); NaN where degenerate."""
    r = np.asarray(r, dtype=float)
    l = lengths_local(r, eps, eta)
    Q = q_local(r, eps, eta)
    h = h_local(1.0 / r, eps, eta)
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.where(Q > 0, np.sqrt(np.where(Q > 0, Q, 1.0)), np.nan)
        # w[t]: entry for the corner pair (q, s) that excludes t
        w = _s(r) * _t(r) * h / (sq[..., None] * l * l)
    J = np.empty(r.shape + (3,))
    for t in range(3):
        q, s = (t + 1) % 3, (t + 2) % 3
        J[..., q, s] = w[..., t]
        J[..., s, q] = w[..., t]
    for q in range(3):
        s, t = (q + 1) % 3, (q + 2) % 3
        J[..., q, q] = -(w[..., s] + w[..., t])
    return J


# -- per-face public API ----------------------------------------------------

def edge_length_e(f_i, f_j, eps_i, eps_j, eta_ij):
    ri, rj = math.exp(f_i), math.exp(f_j)
    rad = eps_i * ri * ri + eps_j * rj * rj + 2.0 * eta_ij * ri * rj
    if not rad > 0:
        raise NonpositiveRadicand(f"radicand {rad} <= 0; structure condition C1 fails")
    return math.sqrt(rad)


def q_value_e(scheme, face, r):
    eps, eta = scheme.face_local(face)
    return float(q_local(r, eps, eta))


def degenerate_interval_e(scheme, face, corner, r_s, r_t):
    """Threshold T with V_corner = {r_corner <= T}, or None if A_corner <= 0.

    ``r_s`` and ``r_t`` are the radii of the other two corners in cyclic
    order after ``corner``; the threshold is symmetric in them anyway.
    """
    face = list(face)
    q = face.index(corner)
    eps, eta = scheme.face_local(face)
    r = np.ones(3)
    r[(q + 1) % 3] = r_s
    r[(q + 2) % 3] = r_t
    T = thresholds_local(r, eps, eta)[q]
    return None if np.isnan(T) else float(T)


def angles_e(l_ij, l_ik, l_jk):
    """Angles (theta_i, theta_j, theta_k) of a Euclidean triangle from its sides."""
    l = np.array([l_jk, l_ik, l_ij], dtype=float)
    a, b, c = l
    prod4 = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    scale = float(np.sum(l * l)) ** 2
    if prod4 < -BOUNDARY_TOL * scale or not np.all(l > 0):
        raise DegenerateTriangle(f"lengths {tuple(l[::-1])} violate the triangle inequality")
    return _angles_from_sq(l, prod4)


def extended_angles_e(scheme, face, r):
    eps, eta = scheme.face_local(face)
    return extended_angles_local(np.asarray(r, dtype=float), eps, eta)


def _require_nondegenerate(scheme, face, r):
    eps, eta = scheme.face_local(face)
    r = np.asarray(r, dtype=float)
    Q = q_local(r, eps, eta)
    if not Q > 0:
        raise DegenerateTriangle(f"face {tuple(face)} is degenerate at r={tuple(r)} (Q={Q:.6g})")
    return eps, eta, r, Q


def jacobian_e(scheme, face, r):
    eps, eta, r, _ = _require_nondegenerate(scheme, face, r)
    return jacobian_local(r, eps, eta)


def center_data_e(scheme, face, r):
    """Power-center data of a nondegenerate face.

    Returns ``(d, hc)``: ``d[(a, b)]`` for ordered corner pairs (local
    indices) is the signed distance from vertex a to the edge center of
    {a, b}; ``hc[q]`` is the signed distance of the face center to the
    edge opposite corner q.
    """
    eps, eta, r, Q = _require_nondegenerate(scheme, face, r)
    l = lengths_local(r, eps, eta)
    d = {}
    for q in range(3):
        for s in range(3):
            if s == q:
                continue
            t = 3 - q - s
            d[(q, s)] = (eps[q] * r[q] ** 2 + eta[t] * r[q] * r[s]) / l[t]
    h = h_local(1.0 / r, eps, eta)
    hc = np.prod(r) * (1.0 / r) * h / (math.sqrt(Q) * l)
    return d, hc


@dataclass
class EuclideanFaceGeom:
    lengths: np.ndarray
    q_value: float
    h: np.ndarray
    degenerate: bool
    angles: np.ndarray
    jacobian: np.ndarray = None
    area_term: float = None


def face_geom_e(scheme, face, r):
    """Everything about one face at radii r (Jacobian only when nondegenerate)."""
    eps, eta = scheme.face_local(face)
    r = np.asarray(r, dtype=float)
    l = lengths_local(r, eps, eta)
    Q = float(q_local(r, eps, eta))
    g = EuclideanFaceGeom(
        lengths=l,
        q_value=Q,
        h=h_local(1.0 / r, eps, eta),
        degenerate=not Q > 0,
        angles=extended_angles_local(r, eps, eta),
    )
    if not g.degenerate:
        g.jacobian = jacobian_local(r, eps, eta)
        g.area_term = float(np.prod(r) * math.sqrt(Q))
    return g
