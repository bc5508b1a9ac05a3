"""Ricci energy, target potential and Calabi energy.

The face energy is the line integral of the closed 1-form
``theta_i du_i + theta_j du_j + theta_k du_k`` along a straight segment.
Angles behave like ``pi - c sqrt(dist)`` next to a degenerate region, so
each segment is split where Q changes sign and every piece is integrated
in the smoothstep variable ``t = a + (b - a)(3 s^2 - 2 s^3)``, which turns
square-root endpoints into analytic ones.  Composite 16-node
Gauss-Legendre with adaptive bisection does the rest.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .curvature import vertex_curvature
from .errors import BadTarget, DegenerateFace, PathLeavesAdmissible
from .state import EUCLIDEAN, ConformalState, check_background, kernels

__all__ = [
    "EnergyReport",
    "triangle_energy",
    "ricci_energy",
    "target_potential",
    "calabi_energy",
    "calabi_gradient",
    "potential_difference",
    "base_point",
    "check_target",
]

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
QUAD_TOL = 1e-10
MAX_DEPTH = 40
SIGN_SAMPLES = 65


@dataclass
class EnergyReport:
    value: float
    base_point: np.ndarray
    quadrature: dict


class _Counter:
    def __init__(self):
        self.pieces = 0
        self.leaves = 0


def _gl(fn, a, b):
    x = 0.5 * (b - a) * GL_NODES + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.dot(GL_WEIGHTS, fn(x)))


def _adaptive(fn, a, b, whole, tol, depth, counter):
    m = 0.5 * (a + b)
    left, right = _gl(fn, a, m), _gl(fn, m, b)
    if abs(left + right - whole) < tol or depth >= MAX_DEPTH:
        counter.leaves += 2
        return left + right
    return (_adaptive(fn, a, m, left, 0.5 * tol, depth + 1, counter)
            + _adaptive(fn, m, b, right, 0.5 * tol, depth + 1, counter))


def _face_segment_integral(kern, eps, eta, u0, u1, extended, counter, tol=QUAD_TOL):
    """Integral of (extended) theta . du from u0 to u1 for one face."""
    d = u1 - u0
    if not np.any(d):
        return 0.0

    def q_at(t):
        t = np.atleast_1d(t)
        return kern.q(kern.f_of_u(u0 + t[:, None] * d, eps), eps, eta)

    ts = np.linspace(0.0, 1.0, SIGN_SAMPLES)
    qs = q_at(ts)
    if not extended and not np.all(qs > 0):
        raise PathLeavesAdmissible("segment leaves the nondegenerate region")

    breaks = [0.0]
    pos = qs > 0
    for n in np.nonzero(pos[1:] != pos[:-1])[0]:
        a, b = ts[n], ts[n + 1]
        breaks.append(brentq(lambda t: float(q_at(t)[0]), a, b, xtol=1e-15, rtol=1e-15))
    breaks.append(1.0)

    angle_fn = kern.extended_angles if extended else kern.angles

    def integrand(t):
        vals = angle_fn(kern.f_of_u(u0 + t[:, None] * d, eps), eps, eta) @ d
        if not extended and np.any(np.isnan(vals)):
            raise PathLeavesAdmissible("segment leaves the nondegenerate region")
        return vals

    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        w = b - a

        def piece(s, a=a, w=w):
            return integrand(a + w * s * s * (3.0 - 2.0 * s)) * (6.0 * w * s * (1.0 - s))

        counter.pieces += 1
        whole = _gl(piece, 0.0, 1.0)
        total += _adaptive(piece, 0.0, 1.0, whole, tol, 0, counter)
    return total


def base_point(scheme, background):
    """Fixed integration origin: u = 0, or u = -1 at hyperbolic vertices with eps = 1."""
    eps = np.asarray(scheme.epsilon, dtype=float)
    if check_background(background) == EUCLIDEAN:
        return np.zeros(len(eps))
    return np.where(eps == 1, -1.0, 0.0)


def triangle_energy(scheme, face, u_target, u_base, background, extended=False):
    kern = kernels(background)
    eps, eta = scheme.face_local(face)
    u0 = np.asarray(u_base, dtype=float)
    u1 = np.asarray(u_target, dtype=float)
    # both endpoints must be in the u-domain (DomainError otherwise)
    kern.f_of_u(u0, eps)
    kern.f_of_u(u1, eps)
    return _face_segment_integral(kern, eps, eta, u0, u1, extended, _Counter())


def _require_nondegenerate(surface, scheme, state):
    eps, eta = scheme.face_arrays(surface)
    bad = ~(kernels(state.background).q(state.f[surface.faces], eps, eta) > 0)
    if bad.any():
        fid = int(np.argmax(bad))
        raise DegenerateFace(fid, f"Q <= 0 at vertices {tuple(int(v) for v in surface.faces[fid])}")


def _sum_face_integrals(surface, scheme, u0, u1, background, counter):
    kern = kernels(background)
    eps, eta = scheme.face_arrays(surface)
    total = 0.0
    for n, face in enumerate(surface.faces):
        total += _face_segment_integral(kern, eps[n], eta[n], u0[face], u1[face], True, counter)
    return total


def ricci_energy(surface, scheme, u, background, extended=False, report=False):
    """2 pi sum(u) minus the face energies, measured from :func:`base_point`.

    The face integrals always use the extended 1-form.  It agrees with the
    ordinary one on the nondegenerate region and is closed everywhere, so
    for ``extended=False`` this only adds the requirement that u itself is
    nondegenerate.
    """
    u = np.asarray(u, dtype=float)
    state = ConformalState.from_u(background, u, scheme.epsilon)
    if not extended:
        _require_nondegenerate(surface, scheme, state)
    base = base_point(scheme, background)
    counter = _Counter()
    value = 2.0 * math.pi * float(np.sum(u)) - _sum_face_integrals(
        surface, scheme, base, u, background, counter)
    if report:
        return EnergyReport(value, base, {"nodes": len(GL_NODES), "pieces": counter.pieces,
                                          "subintervals": counter.leaves})
    return value


def check_target(surface, K_bar, background, tol=1e-9):
    K_bar = np.asarray(K_bar, dtype=float)
    if K_bar.shape != (surface.vertex_count,):
        raise BadTarget(f"target has shape {K_bar.shape}, expected ({surface.vertex_count},)")
    total = float(np.sum(K_bar))
    gb = 2.0 * math.pi * surface.euler_characteristic
    if check_background(background) == EUCLIDEAN:
        if abs(total - gb) > tol * max(1.0, abs(gb)):
            raise BadTarget(f"target sum {total:.12g} differs from 2 pi chi = {gb:.12g}")
    else:
        if not total > gb:
            raise BadTarget(f"target sum {total:.12g} must exceed 2 pi chi = {gb:.12g}")
    if np.any(K_bar >= 2.0 * math.pi):
        raise BadTarget("every target curvature must be below 2 pi")
    return K_bar


def target_potential(surface, scheme, u, K_bar, background, extended=False):
    K_bar = check_target(surface, K_bar, background)
    u = np.asarray(u, dtype=float)
    return ricci_energy(surface, scheme, u, background, extended) - float(K_bar @ u)


def potential_difference(surface, scheme, u0, u1, K_bar, background):
    """H(u1) - H(u0) for the extended target potential, integrated along u0 -> u1."""
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    d = u1 - u0
    return float((2.0 * math.pi - np.asarray(K_bar)) @ d) - _sum_face_integrals(
        surface, scheme, u0, u1, background, _Counter())


def calabi_energy(surface, scheme, u, K_bar, background):
    state = ConformalState.from_u(background, u, scheme.epsilon)
    K = vertex_curvature(surface, scheme, state, extended=False).values
    r = np.asarray(K_bar, dtype=float) - K
    return 0.5 * float(r @ r)


def calabi_gradient(surface, scheme, u, K_bar, background):
    """-Lambda (K_bar - K)."""
    from .curvature import curvature_jacobian
    state = ConformalState.from_u(background, u, scheme.epsilon)
    K = vertex_curvature(surface, scheme, state, extended=False).values
    lam = curvature_jacobian(surface, scheme, state)
    return -(lam @ (np.asarray(K_bar, dtype=float) - K))
