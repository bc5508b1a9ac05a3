"""Scheme coefficients (epsilon) and conformal-structure coefficients (eta).

Per-face arrays use the *opposite-corner* convention: for a face with
corners (i, j, k), ``eta[..., q]`` is the weight of the edge opposite corner
q, i.e. ``(eta_jk, eta_ik, eta_ij)``.  All ``*_local`` kernels broadcast over
leading axes so whole meshes can be evaluated at once.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CornerNotInFace, MissingWeight, NonpositiveKappa
from .surface import edge_key

__all__ = [
    "WeightScheme",
    "ConditionReport",
    "validate_scheme",
    "corner_gamma",
    "h_values",
    "g_term",
    "gamma_local",
    "h_local",
    "g_local",
    "a_local",
    "uniform_scheme",
]


def _s(x):
    return np.roll(x, -1, axis=-1)


def _t(x):
    return np.roll(x, -2, axis=-1)


def gamma_local(eps, eta):
    """gamma_q = eps_q * eta_st + eta_qs * eta_qt for each corner q."""
    eps = np.asarray(eps, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return eps * eta + _s(eta) * _t(eta)


def a_local(eps, eta):
    """A_q = eta_st^2 - eps_s eps_t; corner q can degenerate only if A_q > 0."""
    eps = np.asarray(eps, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return eta * eta - _s(eps) * _t(eps)


def h_local(kappa, eps, eta):
    """h_q = (eps_s eps_t - eta_st^2) kappa_q + kappa_s gamma_t + kappa_t gamma_s."""
    kappa = np.asarray(kappa, dtype=float)
    gam = gamma_local(eps, eta)
    return -a_local(eps, eta) * kappa + _s(kappa) * _t(gam) + _t(kappa) * _s(gam)


def g_local(eps, eta):
    """G = sum eps_q eta_st^2 + 2 eta_ij eta_ik eta_jk - eps_i eps_j eps_k."""
    eps = np.asarray(eps, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return (np.sum(eps * eta * eta, axis=-1)
            + 2.0 * np.prod(eta, axis=-1) - np.prod(eps, axis=-1))


@dataclass
class WeightScheme:
    """Vertex scheme coefficients and symmetric edge weights.

    ``epsilon`` is a length-N sequence of values in {0, 1}; ``eta`` maps
    edge keys (a, b), a < b, to reals.  Keys given in either order are
    canonicalized.
    """

    epsilon: np.ndarray
    eta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.epsilon = np.asarray(self.epsilon, dtype=float)
        self.eta = {edge_key(*e): float(v) for e, v in self.eta.items()}
        bad = [v for v in np.unique(self.epsilon) if v not in (0.0, 1.0)]
        if bad:
            raise ValueError(f"epsilon values must lie in {{0, 1}}, got {bad}")
        self._cache = {}

    def eta_of(self, a, b):
        try:
            return self.eta[edge_key(a, b)]
        except KeyError:
            raise MissingWeight(f"edge {edge_key(a, b)}") from None

    def eps_of(self, v):
        if not 0 <= v < len(self.epsilon):
            raise MissingWeight(f"vertex {v}")
        return float(self.epsilon[v])

    def face_local(self, face):
        """(eps, eta) arrays of one face given as a vertex triple."""
        i, j, k = face
        eps = np.array([self.eps_of(i), self.eps_of(j), self.eps_of(k)])
        eta = np.array([self.eta_of(j, k), self.eta_of(i, k), self.eta_of(i, j)])
        return eps, eta

    def face_arrays(self, surface):
        """(F, 3) arrays of eps and opposite-edge eta for every face."""
        key = id(surface)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is surface:
            return hit[1], hit[2]
        check_coverage(surface, self)
        eps = self.epsilon[surface.faces]
        eta_e = np.array([self.eta[e] for e in surface.edges])
        eta = eta_e[surface.face_edges]
        eps.setflags(write=False)
        eta.setflags(write=False)
        self._cache[key] = (surface, eps, eta)
        return eps, eta


def uniform_scheme(surface, epsilon=1.0, eta=1.0):
    return WeightScheme(np.full(surface.vertex_count, float(epsilon)),
                        {e: float(eta) for e in surface.edges})


def check_coverage(surface, scheme):
    if len(scheme.epsilon) != surface.vertex_count:
        n = len(scheme.epsilon)
        raise MissingWeight(f"vertex {n}" if n < surface.vertex_count
                            else f"epsilon has {n} entries for {surface.vertex_count} vertices")
    for e in surface.edges:
        if e not in scheme.eta:
            raise MissingWeight(f"edge {e}")


@dataclass
class ConditionReport:
    """Violations of the two structure conditions.

    c1 holds ``(edge, value)`` with value = eps_s eps_t + eta_st <= 0.
    c2 holds ``(face_id, corner_vertex, value)`` with
    value = eps_q eta_st + eta_qs eta_qt < 0.
    """

    c1: list = field(default_factory=list)
    c2: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.c1 and not self.c2

    def __len__(self):
        return len(self.c1) + len(self.c2)

    def lines(self):
        out = []
        for e, v in self.c1:
            out.append(f"C1 violated on edge {e}: eps*eps + eta = {v:.12g} <= 0")
        for fid, q, v in self.c2:
            out.append(f"C2 violated on face {fid} at corner {q}: "
                       f"eps_q eta_st + eta_qs eta_qt = {v:.12g} < 0")
        return out


def validate_scheme(surface, scheme):
    """Check C1 on every edge and C2 at every corner of every face (exactly)."""
    check_coverage(surface, scheme)
    report = ConditionReport()
    eps = scheme.epsilon
    for (a, b) in surface.edges:
        v = eps[a] * eps[b] + scheme.eta[(a, b)]
        if not v > 0:
            report.c1.append(((a, b), float(v)))
    feps, feta = scheme.face_arrays(surface)
    gam = gamma_local(feps, feta)
    for fid, q in zip(*np.nonzero(gam < 0)):
        report.c2.append((int(fid), int(surface.faces[fid, q]), float(gam[fid, q])))
    return report


def _corner_pos(face, corner):
    try:
        return list(face).index(corner)
    except ValueError:
        raise CornerNotInFace(f"vertex {corner} is not a corner of face {tuple(face)}") from None


def corner_gamma(scheme, face, corner):
    q = _corner_pos(face, corner)
    eps, eta = scheme.face_local(face)
    return float(gamma_local(eps, eta)[q])


def h_values(kappa, scheme, face):
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise NonpositiveKappa(f"kappa must be positive, got {kappa}")
    eps, eta = scheme.face_local(face)
    return h_local(kappa, eps, eta)


def g_term(scheme, face):
    eps, eta = scheme.face_local(face)
    return float(g_local(eps, eta))
