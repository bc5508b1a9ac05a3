"""Invariant battery run by ``dcstruct verify``.

Each check returns a :class:`CheckResult`; the battery runs on a given
instance (if any) plus seeded random instances on the built-in meshes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import euclid, hyper
from .curvature import curvature_jacobian, gauss_bonnet_residual, vertex_curvature
from .energy import triangle_energy
from .oracle import fd_jacobian, min_max_eigenvalues, scan_admissible
from .sampling import random_face_weights, random_surface_scheme
from .state import EUCLIDEAN, HYPERBOLIC, ConformalState, kernels
from .surface import octahedron, tetrahedron
from .weights import WeightScheme, a_local, validate_scheme

__all__ = ["CheckResult", "check_instance", "random_battery", "run_battery"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def _face_u_angles(kern, eps, eta):
    return lambda u: kern.angles(kern.f_of_u(u, eps), eps, eta)


def check_instance(label, surface, scheme, state):
    """Checks that apply to one (surface, scheme, state) instance."""
    out = []
    report = validate_scheme(surface, scheme)
    out.append(CheckResult(f"{label} structure conditions", report.ok, "; ".join(report.lines())))
    if not report.ok:
        return out
    bg = state.background
    kern = kernels(bg)
    eps, eta = scheme.face_arrays(surface)
    f = state.f[surface.faces]
    nondeg = kern.q(f, eps, eta) > 0

    # face Jacobians: finite differences, symmetry, definiteness
    worst_fd = worst_sym = 0.0
    definite = True
    J = kern.jacobian(f, eps, eta)
    for n in np.nonzero(nondeg)[0]:
        u = kern.u_of_f(f[n], eps[n])
        num = fd_jacobian(_face_u_angles(kern, eps[n], eta[n]), u, 1e-6)
        worst_fd = max(worst_fd, float(np.max(np.abs(num - J[n]))))
        worst_sym = max(worst_sym, float(np.max(np.abs(J[n] - J[n].T))))
        lo, hi = min_max_eigenvalues(J[n])
        definite &= (hi <= 1e-10) if bg == EUCLIDEAN else (hi < 0)
    out.append(CheckResult(f"{label} face Jacobian vs finite differences", worst_fd < 1e-5,
                           f"max error {worst_fd:.3g}"))
    out.append(CheckResult(f"{label} face Jacobian symmetry", worst_sym < 1e-12,
                           f"max asymmetry {worst_sym:.3g}"))
    out.append(CheckResult(f"{label} face Jacobian definiteness", bool(definite)))

    # Gauss-Bonnet (extended curvature; ordinary too when possible)
    field = vertex_curvature(surface, scheme, state, extended=True)
    res = gauss_bonnet_residual(field, surface)
    if bg == EUCLIDEAN:
        ok = abs(res) < 1e-10
    else:
        th = kern.extended_angles(f, eps, eta)
        area = float(np.sum(math.pi - th.sum(axis=1)))
        ok = abs(res - area) < 1e-10 and (res > 0 or not nondeg.all())
    out.append(CheckResult(f"{label} Gauss-Bonnet", bool(ok), f"residual {res:.3g}"))

    if nondeg.all():
        lam = curvature_jacobian(surface, scheme, state, sparse=False)
        ev = np.linalg.eigvalsh(lam)
        if bg == EUCLIDEAN:
            ok = abs(ev[0]) < 1e-10 and ev[1] > 1e-10 and np.max(np.abs(lam.sum(axis=1))) < 1e-10
        else:
            ok = ev[0] > 0
        out.append(CheckResult(f"{label} curvature Jacobian spectrum", bool(ok),
                               f"smallest eigenvalues {ev[0]:.3g}, {ev[1]:.3g}"))

    # path independence on the first face
    fid = 0
    face = tuple(surface.faces[fid])
    u1 = kern.u_of_f(f[fid], eps[fid])
    u0 = u1 - 0.3 if bg == EUCLIDEAN else np.minimum(u1, -0.05) - 0.3
    mid = u0 + np.array([0.25, -0.1, 0.05]) * (0.3 if bg == EUCLIDEAN else -1)
    direct = triangle_energy(scheme, face, u1, u0, bg, extended=True)
    legs = (triangle_energy(scheme, face, mid, u0, bg, extended=True)
            + triangle_energy(scheme, face, u1, mid, bg, extended=True))
    out.append(CheckResult(f"{label} energy path independence", abs(direct - legs) < 1e-8,
                           f"difference {abs(direct - legs):.3g}"))
    return out


def _region_scan_check(rng, bg, count=10):
    worst = 0.0
    for _ in range(count):
        eps, eta = random_face_weights(rng, need_degenerate_corner=True)
        scheme = WeightScheme(eps, {(1, 2): eta[0], (0, 2): eta[1], (0, 1): eta[2]})
        face = (0, 1, 2)
        q = int(np.argmax(a_local(eps, eta) > 0))
        others = rng.uniform(0.5, 1.5, size=3) if bg == EUCLIDEAN else rng.uniform(-1, 1, size=3)
        s, t = face[(q + 1) % 3], face[(q + 2) % 3]
        if bg == EUCLIDEAN:
            T = euclid.degenerate_interval_e(scheme, face, q, others[s], others[t])
            lo, hi = 1e-3, 2.0
        else:
            try:
                T = hyper.degenerate_interval_h(scheme, face, q, others[s], others[t])
            except ArithmeticError:
                continue
            lo, hi = -6.0, 3.0
        if T is None or not lo < T < hi:
            continue
        scan = scan_admissible(scheme, face, bg, q, others, lo, hi, 1001)
        # V_q is the low end of the axis; a later crossing belongs to another corner
        if not scan.crossings or scan.signs[0] > 0:
            worst = math.inf
            continue
        worst = max(worst, abs(scan.crossings[0] - T) / (hi - lo))
    return CheckResult(f"{bg} region threshold vs sign scan", worst <= 1e-3,
                       f"max relative offset {worst:.3g}")


def random_battery(seed=0, instances=3):
    rng = np.random.default_rng(seed)
    out = []
    for bg in (EUCLIDEAN, HYPERBOLIC):
        for mesh_name, mesh in (("tetrahedron", tetrahedron), ("octahedron", octahedron)):
            for k in range(instances):
                surface = mesh()
                scheme = random_surface_scheme(surface, rng)
                f = rng.uniform(-0.5, 0.5, size=surface.vertex_count)
                state = ConformalState(bg, f, scheme.epsilon)
                out.extend(check_instance(f"{bg} {mesh_name} #{k}", surface, scheme, state))
        out.append(_region_scan_check(rng, bg))
    return out


def run_battery(instance=None, seed=0):
    """instance is an optional (label, surface, scheme, state) tuple."""
    results = []
    if instance is not None:
        results.extend(check_instance(*instance))
    results.extend(random_battery(seed))
    return results
