"""Combinatorics of closed triangulated surfaces."""

from collections import defaultdict, deque

import numpy as np

from .errors import BadIndex, DegenerateFace, Disconnected, NonManifoldEdge

__all__ = [
    "TriangulatedSurface",
    "build_surface",
    "euler_characteristic",
    "edge_key",
    "tetrahedron",
    "octahedron",
    "icosahedron",
    "torus_grid",
]


def edge_key(a, b):
    """Canonical (min, max) key of an unordered edge."""
    a, b = int(a), int(b)
    return (a, b) if a < b else (b, a)


class TriangulatedSurface:
    """A closed, connected triangulated surface.

    Instances are immutable after construction; use :func:`build_surface`.

    Attributes
    ----------
    vertex_count : int
    faces : (F, 3) int array, corner order as given by the caller
    edges : list of (a, b) with a < b, sorted
    edge_index : dict mapping edge key -> row in ``edges``
    vertex_faces : list of tuples of face ids incident to each vertex
    edge_faces : dict mapping edge key -> (f0, f1)
    face_edges : (F, 3) int array; column q holds the id of the edge
        opposite corner q
    """

    def __init__(self, vertex_count, faces, edges, edge_faces, vertex_faces):
        self.vertex_count = vertex_count
        self.faces = faces
        self.faces.setflags(write=False)
        self.edges = edges
        self.edge_index = {e: n for n, e in enumerate(edges)}
        self.edge_faces = edge_faces
        self.vertex_faces = vertex_faces
        fe = np.empty_like(faces)
        for n, (i, j, k) in enumerate(faces):
            fe[n] = (self.edge_index[edge_key(j, k)],
                     self.edge_index[edge_key(i, k)],
                     self.edge_index[edge_key(i, j)])
        fe.setflags(write=False)
        self.face_edges = fe
        self.euler_characteristic = vertex_count - len(edges) + len(faces)

    @property
    def face_count(self):
        return len(self.faces)

    @property
    def edge_count(self):
        return len(self.edges)

    def __repr__(self):
        return (f"TriangulatedSurface(V={self.vertex_count}, E={self.edge_count}, "
                f"F={self.face_count}, chi={self.euler_characteristic})")


def build_surface(vertex_count, faces):
    """Validate a face list and compute all adjacency data.

    Raises BadIndex, DegenerateFace (repeated vertex), NonManifoldEdge
    (edge with a number of incident faces other than two) or Disconnected.
    """
    n = int(vertex_count)
    if n <= 0:
        raise BadIndex(f"vertex_count must be positive, got {vertex_count}")
    faces = [tuple(int(v) for v in f) for f in faces]
    if not faces:
        raise BadIndex("face list is empty")

    edge_faces = defaultdict(list)
    vertex_faces = [[] for _ in range(n)]
    for fid, f in enumerate(faces):
        if len(f) != 3:
            raise BadIndex(f"face {fid} has {len(f)} vertices")
        for v in f:
            if not 0 <= v < n:
                raise BadIndex(f"face {fid} references vertex {v} outside [0, {n})")
        if len(set(f)) != 3:
            raise DegenerateFace(fid, "repeated vertex")
        i, j, k = f
        for e in (edge_key(i, j), edge_key(j, k), edge_key(i, k)):
            edge_faces[e].append(fid)
        for v in f:
            vertex_faces[v].append(fid)

    for e in sorted(edge_faces):
        if len(edge_faces[e]) != 2:
            raise NonManifoldEdge(e, len(edge_faces[e]))

    if any(not vf for vf in vertex_faces):
        unused = [v for v, vf in enumerate(vertex_faces) if not vf]
        raise Disconnected(f"vertices {unused} are not used by any face")

    # connectivity of the face-adjacency graph
    seen = {0}
    queue = deque([0])
    while queue:
        fid = queue.popleft()
        i, j, k = faces[fid]
        for e in (edge_key(i, j), edge_key(j, k), edge_key(i, k)):
            for g in edge_faces[e]:
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    if len(seen) != len(faces):
        raise Disconnected(f"{len(faces) - len(seen)} faces unreachable from face 0")

    edges = sorted(edge_faces)
    return TriangulatedSurface(
        n,
        np.array(faces, dtype=np.int64),
        edges,
        {e: tuple(fs) for e, fs in edge_faces.items()},
        [tuple(vf) for vf in vertex_faces],
    )


def euler_characteristic(surface):
    """|V| - |E| + |F|."""
    return surface.vertex_count - surface.edge_count + surface.face_count


# -- standard meshes --------------------------------------------------------

def tetrahedron():
    return build_surface(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def octahedron():
    # 0/5 are the poles, 1..4 the equator
    faces = []
    for a in range(4):
        b = a % 4 + 1
        c = (a + 1) % 4 + 1
        faces.append((0, b, c))
        faces.append((5, b, c))
    return build_surface(6, faces)


def icosahedron():
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 6, 2), (2, 7, 3), (3, 8, 4), (4, 9, 5), (5, 10, 1),
        (6, 7, 2), (7, 8, 3), (8, 9, 4), (9, 10, 5), (10, 6, 1),
        (11, 7, 6), (11, 8, 7), (11, 9, 8), (11, 10, 9), (11, 6, 10),
    ]
    return build_surface(12, faces)


def torus_grid(n=4, m=4):
    """Flat-torus triangulation of an n x m periodic grid, one diagonal per cell."""
    if n < 3 or m < 3:
        raise BadIndex("torus grid needs n, m >= 3 to be a simplicial complex")

    def vid(a, b):
        return (a % n) * m + (b % m)

    faces = []
    for a in range(n):
        for b in range(m):
            v00, v10, v01, v11 = vid(a, b), vid(a + 1, b), vid(a, b + 1), vid(a + 1, b + 1)
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    return build_surface(n * m, faces)
