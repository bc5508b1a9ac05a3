"""Hyperbolic face kernels.

Vertex data: ``S = exp(f)``, ``C = sqrt(1 + eps S^2)``, ``kappa = C / S``.
The conformal coordinate is ``u = f`` where eps = 0 and
``u = 0.5 ln((C - 1)/(C + 1)) = f - ln(1 + C)`` where eps = 1, so that
``df/du = C``.  Local arrays use the opposite-corner convention; cosh
lengths are carried instead of lengths to avoid an arccosh round trip.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentNotAboveOne, DegenerateTriangle, DomainError, NoRealThreshold
from .weights import a_local, g_local, gamma_local, h_local

__all__ = [
    "HyperbolicFaceGeom",
    "u_of_f",
    "f_of_u",
    "df_du",
    "edge_length_h",
    "q_value_h",
    "degenerate_interval_h",
    "angles_h",
    "extended_angles_h",
    "jacobian_h",
    "face_area_h",
    "area_tan_identity",
    "length_bound_constants",
    "face_geom_h",
    "vertex_sc",
    "cosh_lengths_local",
    "q_local",
    "kappa_thresholds_local",
    "angles_local",
    "extended_angles_local",
    "jacobian_local",
]

BOUNDARY_TOL = 1e-14


def _s(x):
    return np.roll(x, -1, axis=-1)


def _t(x):
    return np.roll(x, -2, axis=-1)


def arccosh_clamped(x):
    x = np.maximum(np.asarray(x, dtype=float), 1.0)
    return np.log(x + np.sqrt((x - 1.0) * (x + 1.0)))


# -- coordinates ------------------------------------------------------------

def vertex_sc(f, eps):
    S = np.exp(np.asarray(f, dtype=float))
    C = np.sqrt(1.0 + np.asarray(eps, dtype=float) * S * S)
    return S, C


def u_of_f(f, eps):
    f = np.asarray(f, dtype=float)
    eps = np.broadcast_to(np.asarray(eps, dtype=float), f.shape)
    S, C = vertex_sc(f, eps)
    # f - ln(1 + C) without cancellation, using C - S = 1 / (C + S)
    u = np.where(eps == 1, -np.log1p((1.0 + 1.0 / (C + S)) / S), f)
    return float(u) if u.ndim == 0 else u


def f_of_u(u, eps):
    u = np.asarray(u, dtype=float)
    eps = np.broadcast_to(np.asarray(eps, dtype=float), u.shape)
    if np.any((eps == 1) & ~(u < 0)):
        raise DomainError("u must be negative at vertices with eps = 1")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        # inverse of u = ln tanh(a/2) with e^f = sinh a
        f1 = math.log(2.0) + u - np.log(-np.expm1(2.0 * np.minimum(u, 0.0)))
    f = np.where(eps == 1, f1, u)
    return float(f) if f.ndim == 0 else f


def df_du(f, eps):
    return vertex_sc(f, eps)[1]


# -- vectorized kernels -----------------------------------------------------

def cosh_lengths_local(f, eps, eta):
    S, C = vertex_sc(f, eps)
    c = _s(C) * _t(C) + np.asarray(eta) * _s(S) * _t(S)
    if np.any(c <= 1.0):
        raise ArgumentNotAboveOne("cosh length <= 1; structure condition C1 fails")
    return c


def q_local(f, eps, eta):
    S, C = vertex_sc(f, eps)
    kappa = C / S
    return np.sum(kappa * h_local(kappa, eps, eta), axis=-1) + g_local(eps, eta)


def _quadratic(f, eps, eta):
    S, C = vertex_sc(f, eps)
    kappa = C / S
    ks, kt = _s(kappa), _t(kappa)
    gam = gamma_local(eps, eta)
    eps = np.asarray(eps, dtype=float)
    eta = np.asarray(eta, dtype=float)
    A = a_local(eps, eta)
    B = -2.0 * (_t(gam) * ks + _s(gam) * kt)
    C2 = ((_s(eta) ** 2 - eps * _t(eps)) * ks * ks
          + (_t(eta) ** 2 - eps * _s(eps)) * kt * kt
          - 2.0 * ks * kt * gam) - g_local(eps, eta)[..., None]
    return A, B, C2


def kappa_thresholds_local(f, eps, eta):
    """kappa threshold per corner with V_q = {kappa_q >= threshold}; NaN where A_q <= 0."""
    A, B, C = _quadratic(f, eps, eta)
    with np.errstate(invalid="ignore", divide="ignore"):
        k = (-B + np.sqrt(B * B - 4.0 * A * C)) / (2.0 * A)
    return np.where(A > 0, k, np.nan)


def _angles_from_cosh(c, disc):
    """Angles from opposite cosh lengths and 1 + 2 c0 c1 c2 - sum c^2 >= 0."""
    cs, ct = _s(c), _t(c)
    y = np.sqrt(np.maximum(disc, 0.0))[..., None]
    return np.arctan2(np.broadcast_to(y, c.shape), cs * ct - c)


def _heron_h(f, eps, eta):
    S, _ = vertex_sc(f, eps)
    sp = np.prod(S, axis=-1)
    return sp * sp * q_local(f, eps, eta)


def angles_local(f, eps, eta):
    f = np.asarray(f, dtype=float)
    c = cosh_lengths_local(f, eps, eta)
    disc = _heron_h(f, eps, eta)
    th = _angles_from_cosh(c, disc)
    return np.where((disc > 0)[..., None], th, np.nan)


def degenerate_corner(f, eps, eta):
    f = np.asarray(f, dtype=float)
    Q = q_local(f, eps, eta)
    S, C = vertex_sc(f, eps)
    kappa = C / S
    kt = kappa_thresholds_local(f, eps, eta)
    inside = np.nan_to_num(kappa >= kt * (1 - 1e-13), nan=0).astype(bool)
    first = np.where(inside.any(axis=-1), np.argmax(inside, axis=-1), -1)
    fallback = np.argmin(h_local(kappa, eps, eta), axis=-1)
    corner = np.where(first >= 0, first, fallback)
    return np.where(Q > 0, -1, corner)


def extended_angles_local(f, eps, eta):
    f = np.asarray(f, dtype=float)
    c = cosh_lengths_local(f, eps, eta)
    th = _angles_from_cosh(c, _heron_h(f, eps, eta))
    corner = degenerate_corner(f, eps, eta)
    ext = np.where(np.arange(3) == corner[..., None], math.pi, 0.0)
    return np.where((corner >= 0)[..., None], ext, th)


def jacobian_local(f, eps, eta):
    """d(theta)/d(u) per face, shape (..., 3, 3); NaN where degenerate."""
    f = np.asarray(f, dtype=float)
    S, C = vertex_sc(f, eps)
    c = cosh_lengths_local(f, eps, eta)
    Q = q_local(f, eps, eta)
    h = h_local(C / S, eps, eta)
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.where(Q > 0, np.sqrt(np.where(Q > 0, Q, 1.0)), np.nan)
        # w[t]: entry for the corner pair (q, s) that excludes t
        w = _s(S) * _t(S) * h / (sq[..., None] * (c * c - 1.0))
    J = np.empty(f.shape + (3,))
    for t in range(3):
        q, s = (t + 1) % 3, (t + 2) % 3
        J[..., q, s] = w[..., t]
        J[..., s, q] = w[..., t]
    for q in range(3):
        s, t = (q + 1) % 3, (q + 2) % 3
        J[..., q, q] = -(w[..., t] * c[..., t] + w[..., s] * c[..., s])
    return J


# -- per-face public API ----------------------------------------------------

def edge_length_h(f_i, f_j, eps_i, eps_j, eta_ij):
    Si, Sj = math.exp(f_i), math.exp(f_j)
    x = math.sqrt((1 + eps_i * Si * Si) * (1 + eps_j * Sj * Sj)) + eta_ij * Si * Sj
    if not x > 1.0:
        raise ArgumentNotAboveOne(f"cosh length {x} <= 1; structure condition C1 fails")
    return float(arccosh_clamped(x))


def q_value_h(scheme, face, f):
    eps, eta = scheme.face_local(face)
    return float(q_local(np.asarray(f, dtype=float), eps, eta))


def degenerate_interval_h(scheme, face, corner, f_s, f_t):
    """Threshold T on f_corner with V_corner = {f_corner <= T}, or None if A <= 0."""
    face = list(face)
    q = face.index(corner)
    eps, eta = scheme.face_local(face)
    f = np.zeros(3)
    f[(q + 1) % 3] = f_s
    f[(q + 2) % 3] = f_t
    k = kappa_thresholds_local(f, eps, eta)[q]
    if np.isnan(k):
        return None
    arg = k * k - eps[q]
    if not arg > 0:
        raise NoRealThreshold(
            f"kappa threshold {k:.12g} gives kappa^2 - eps = {arg:.12g} <= 0 at corner {corner}")
    return float(-0.5 * math.log(arg))


def angles_h(cosh_lengths):
    """Angles (theta_i, theta_j, theta_k) from (cosh l_ij, cosh l_ik, cosh l_jk)."""
    cij, cik, cjk = (float(x) for x in cosh_lengths)
    c = np.array([cjk, cik, cij])
    if np.any(c < 1.0 - BOUNDARY_TOL):
        raise DegenerateTriangle(f"cosh lengths {tuple(cosh_lengths)} below 1")
    c = np.maximum(c, 1.0)
    disc = 1.0 + 2.0 * cij * cik * cjk - cij * cij - cik * cik - cjk * cjk
    if disc < -BOUNDARY_TOL * float(np.sum(c * c)) ** 2 or not np.all(c > 1.0):
        raise DegenerateTriangle(f"cosh lengths {tuple(cosh_lengths)} violate the triangle inequality")
    return _angles_from_cosh(c, disc)


def extended_angles_h(scheme, face, f):
    eps, eta = scheme.face_local(face)
    return extended_angles_local(np.asarray(f, dtype=float), eps, eta)


def jacobian_h(scheme, face, f):
    eps, eta = scheme.face_local(face)
    f = np.asarray(f, dtype=float)
    Q = q_local(f, eps, eta)
    if not Q > 0:
        raise DegenerateTriangle(f"face {tuple(face)} is degenerate at f={tuple(f)} (Q={Q:.6g})")
    return jacobian_local(f, eps, eta)


def face_area_h(scheme, face, f):
    """Hyperbolic area pi - sum(theta) of a nondegenerate face."""
    eps, eta = scheme.face_local(face)
    th = angles_local(np.asarray(f, dtype=float), eps, eta)
    if np.any(np.isnan(th)):
        raise DegenerateTriangle(f"face {tuple(face)} is degenerate")
    return float(math.pi - np.sum(th))


def area_tan_identity(scheme, face, f):
    """tan^2(area/4) as S_i^2 S_j^2 S_k^2 Q over the perimeter cosh^2 products.

    Independent of the angle computation; used to cross-check face areas.
    """
    eps, eta = scheme.face_local(face)
    f = np.asarray(f, dtype=float)
    S, _ = vertex_sc(f, eps)
    l = arccosh_clamped(cosh_lengths_local(f, eps, eta))
    total = np.sum(l)
    combos = np.array([total, total - 2 * l[0], total - 2 * l[1], total - 2 * l[2]])
    sp = np.prod(S)
    return float(sp * sp * q_local(f, eps, eta) / (64.0 * np.prod(np.cosh(combos / 4.0) ** 2)))


def length_bound_constants(eps_j, eta):
    """(lam, mu) with lam (C_i C_j + S_i S_j) <= cosh l <= mu (C_i C_j + S_i S_j), eps_i = 1."""
    mu = 1.0 + abs(eta)
    if eta > 0:
        lam = min(1.0, eta)
    elif eta > -1 and eps_j == 1:
        lam = (1.0 + eta) / 2.0
    else:
        raise ValueError("no lower length bound for eta <= 0 unless eps_j = 1 and eta > -1")
    return lam, mu


@dataclass
class HyperbolicFaceGeom:
    cosh_lengths: np.ndarray
    lengths: np.ndarray
    q_value: float
    h: np.ndarray
    G: float
    degenerate: bool
    angles: np.ndarray
    S: np.ndarray
    C: np.ndarray
    kappa: np.ndarray
    jacobian: np.ndarray = None
    area: float = None


def face_geom_h(scheme, face, f):
    eps, eta = scheme.face_local(face)
    f = np.asarray(f, dtype=float)
    S, C = vertex_sc(f, eps)
    c = cosh_lengths_local(f, eps, eta)
    Q = float(q_local(f, eps, eta))
    g = HyperbolicFaceGeom(
        cosh_lengths=c,
        lengths=arccosh_clamped(c),
        q_value=Q,
        h=h_local(C / S, eps, eta),
        G=float(g_local(eps, eta)),
        degenerate=not Q > 0,
        angles=extended_angles_local(f, eps, eta),
        S=S, C=C, kappa=C / S,
    )
    if not g.degenerate:
        g.jacobian = jacobian_local(f, eps, eta)
        g.area = float(math.pi - np.sum(g.angles))
    return g
