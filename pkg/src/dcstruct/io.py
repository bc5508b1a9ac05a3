"""Text formats for meshes, weights, factors and targets; trace export."""

import csv
import json
import math

import numpy as np

from .errors import BadTarget, MissingWeight, ParseError
from .state import EUCLIDEAN
from .surface import build_surface, icosahedron, octahedron, tetrahedron, torus_grid
from .weights import WeightScheme

__all__ = [
    "read_mesh",
    "write_mesh",
    "read_weights",
    "write_weights",
    "read_factors",
    "read_target",
    "write_trace_csv",
    "write_summary_json",
    "fmt",
]

BUILTIN_MESHES = {
    "tetrahedron": tetrahedron,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "torus": torus_grid,
}


def fmt(x):
    """Numbers are reported with 12 significant digits."""
    return f"{x:.12g}"


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for n, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield n, line.split()


def _int(path, n, tok):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(path, n, f"expected an integer, got {tok!r}") from None


def _float(path, n, tok):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(path, n, f"expected a number, got {tok!r}") from None
    if not math.isfinite(v):
        raise ParseError(path, n, f"non-finite value {tok!r}")
    return v


def read_mesh(path):
    """Read ``vertices N`` / ``faces M`` / M index triples, or ``builtin:NAME``."""
    path = str(path)
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if name not in BUILTIN_MESHES:
            raise ParseError(path, 0, f"unknown builtin mesh {name!r}; "
                             f"choose from {sorted(BUILTIN_MESHES)}")
        return BUILTIN_MESHES[name]()
    it = _lines(path)
    header = {}
    for key in ("vertices", "faces"):
        try:
            n, toks = next(it)
        except StopIteration:
            raise ParseError(path, 0, f"missing '{key}' line") from None
        if len(toks) != 2 or toks[0] != key:
            raise ParseError(path, n, f"expected '{key} <count>'")
        header[key] = _int(path, n, toks[1])
    faces = []
    last = 0
    for n, toks in it:
        last = n
        if len(toks) != 3:
            raise ParseError(path, n, f"face line needs 3 indices, got {len(toks)}")
        faces.append(tuple(_int(path, n, t) for t in toks))
    if len(faces) != header["faces"]:
        raise ParseError(path, last, f"declared {header['faces']} faces, found {len(faces)}")
    return build_surface(header["vertices"], faces)


def write_mesh(path, surface):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"vertices {surface.vertex_count}\nfaces {surface.face_count}\n")
        for f in surface.faces:
            fh.write(" ".join(str(int(v)) for v in f) + "\n")


def read_weights(path, surface):
    """``epsilon v value`` and ``eta i j value`` lines; epsilon defaults to 1."""
    path = str(path)
    eps = np.ones(surface.vertex_count)
    eta = {}
    for n, toks in _lines(path):
        kind = toks[0]
        if kind == "epsilon" and len(toks) == 3:
            v = _int(path, n, toks[1])
            if not 0 <= v < surface.vertex_count:
                raise ParseError(path, n, f"vertex {v} out of range")
            val = _float(path, n, toks[2])
            if val not in (0.0, 1.0):
                raise ParseError(path, n, f"epsilon must be 0 or 1, got {toks[2]}")
            eps[v] = val
        elif kind == "eta" and len(toks) == 4:
            a, b = _int(path, n, toks[1]), _int(path, n, toks[2])
            key = (min(a, b), max(a, b))
            if key not in surface.edge_index:
                raise ParseError(path, n, f"{key} is not an edge of the mesh")
            eta[key] = _float(path, n, toks[3])
        else:
            raise ParseError(path, n, "expected 'epsilon v value' or 'eta i j value'")
    for e in surface.edges:
        if e not in eta:
            raise MissingWeight(f"edge {e}")
    return WeightScheme(eps, eta)


def write_weights(path, scheme):
    with open(path, "w", encoding="utf-8") as fh:
        for v, e in enumerate(scheme.epsilon):
            fh.write(f"epsilon {v} {int(e)}\n")
        for (a, b), w in sorted(scheme.eta.items()):
            fh.write(f"eta {a} {b} {w!r}\n")


def read_factors(path, vertex_count):
    """``f v value`` lines; unlisted factors are 0."""
    f = np.zeros(vertex_count)
    if path is None:
        return f
    path = str(path)
    for n, toks in _lines(path):
        if len(toks) != 3 or toks[0] != "f":
            raise ParseError(path, n, "expected 'f v value'")
        v = _int(path, n, toks[1])
        if not 0 <= v < vertex_count:
            raise ParseError(path, n, f"vertex {v} out of range")
        f[v] = _float(path, n, toks[2])
    return f


def read_target(source, surface, background):
    """Target curvature from a file of ``K v value`` lines or a keyword.

    ``constant`` means 2 pi chi / N and is only defined for the Euclidean
    background; ``constant:VALUE`` sets every vertex to VALUE.
    """
    n = surface.vertex_count
    source = str(source)
    if source == "constant":
        if background != EUCLIDEAN:
            raise BadTarget("hyperbolic runs need an explicit 'constant:VALUE' target")
        return np.full(n, 2.0 * math.pi * surface.euler_characteristic / n)
    if source.startswith("constant:"):
        try:
            val = float(source.split(":", 1)[1])
        except ValueError:
            raise BadTarget(f"cannot read a number from {source!r}") from None
        return np.full(n, val)
    K = np.full(n, np.nan)
    for ln, toks in _lines(source):
        if len(toks) != 3 or toks[0] != "K":
            raise ParseError(source, ln, "expected 'K v value'")
        v = _int(source, ln, toks[1])
        if not 0 <= v < n:
            raise ParseError(source, ln, f"vertex {v} out of range")
        K[v] = _float(source, ln, toks[2])
    missing = np.nonzero(np.isnan(K))[0]
    if len(missing):
        raise BadTarget(f"target file has no value for vertices {missing.tolist()}")
    return K


def write_trace_csv(path, trace):
    n = len(trace.states[0]) if trace.states else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "err", "sum_u"] + [f"u_{i}" for i in range(n)])
        for t, e, s, u in zip(trace.times, trace.errors, trace.sum_u, trace.states):
            w.writerow([fmt(t), fmt(e), fmt(s)] + [fmt(x) for x in u])


def write_summary_json(path, summary):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
