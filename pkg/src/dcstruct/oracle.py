"""Brute-force reference tools: finite differences, sign scans, Jacobi eigenvalues.

Nothing here shares code paths with the closed forms it is used to check.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationFailed, NotSymmetric
from .state import EUCLIDEAN, check_background

__all__ = ["ScanResult", "fd_jacobian", "scan_admissible", "jacobi_eigh", "min_max_eigenvalues",
           "brute_q"]


def fd_jacobian(fn, x, step=1e-6):
    """Central-difference Jacobian; column k is (fn(x + h e_k) - fn(x - h e_k)) / 2h."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = step
        try:
            hi = np.asarray(fn(x + e), dtype=float)
            lo = np.asarray(fn(x - e), dtype=float)
        except Exception as exc:
            raise EvaluationFailed(f"evaluation failed near coordinate {k}: {exc}") from exc
        cols.append((hi - lo) / (2.0 * step))
    return np.stack(cols, axis=-1)


def brute_q(scheme, face, background, f):
    """Q value from the edge lengths alone (Heron-type products), no h-values used."""
    eps, _ = scheme.face_local(face)
    i, j, k = face
    f = np.asarray(f, dtype=float)
    if background == EUCLIDEAN:
        r = np.exp(f)
        sq = {}
        for (a, b), (ra, rb, ea, eb) in {
            (0, 1): (r[0], r[1], eps[0], eps[1]),
            (0, 2): (r[0], r[2], eps[0], eps[2]),
            (1, 2): (r[1], r[2], eps[1], eps[2]),
        }.items():
            w = scheme.eta_of(face[a], face[b])
            sq[(a, b)] = ea * ra * ra + eb * rb * rb + 2 * w * ra * rb
        a, b, c = (np.sqrt(v) for v in sq.values())
        heron = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
        return heron / (4.0 * np.prod(r) ** 2)
    S = np.exp(f)
    C = np.sqrt(1 + eps * S * S)
    ch = {}
    for a, b in ((0, 1), (0, 2), (1, 2)):
        ch[(a, b)] = C[a] * C[b] + scheme.eta_of(face[a], face[b]) * S[a] * S[b]
    x, y, z = ch.values()
    return (1 + 2 * x * y * z - x * x - y * y - z * z) / np.prod(S) ** 2


@dataclass
class ScanResult:
    axis: int
    grid: np.ndarray
    signs: np.ndarray
    crossings: list = field(default_factory=list)


def scan_admissible(scheme, face, background, axis, fixed, lo, hi, samples=1000, log=False):
    """Sign of Q along one corner's coordinate with the other two held fixed.

    ``axis`` is a local corner index, ``fixed`` the full coordinate triple
    (the entry at ``axis`` is overwritten).  Coordinates are radii in the
    Euclidean case and factors f in the hyperbolic case; ``log`` spaces the
    grid geometrically.  Crossings are reported as midpoints between the
    two grid values that straddle a sign change.
    """
    check_background(background)
    if samples < 2:
        raise ValueError("samples must be >= 2")
    grid = np.geomspace(lo, hi, samples) if log else np.linspace(lo, hi, samples)
    signs = np.empty(samples, dtype=int)
    for n, x in enumerate(grid):
        point = np.array(fixed, dtype=float)
        point[axis] = x
        f = np.log(point) if background == EUCLIDEAN else point
        signs[n] = int(np.sign(brute_q(scheme, face, background, f)))
    crossings = [0.5 * (grid[n] + grid[n + 1])
                 for n in range(samples - 1) if (signs[n] > 0) != (signs[n + 1] > 0)]
    return ScanResult(axis, grid, signs, crossings)


def jacobi_eigh(matrix, tol=1e-14, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    scale = max(np.max(np.abs(a)), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def min_max_eigenvalues(matrix, sym_tol=1e-10):
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"matrix of shape {m.shape} is not square")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > sym_tol * max(1.0, np.max(np.abs(m))):
        raise NotSymmetric(f"asymmetry {asym:.3g} exceeds {sym_tol}")
    ev = jacobi_eigh(0.5 * (m + m.T))
    return float(ev[0]), float(ev[-1])
