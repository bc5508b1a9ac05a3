"""Exception hierarchy shared by all modules."""


class DCSError(Exception):
    """Base class for every error raised by dcstruct."""


# mesh / topology

class MeshError(DCSError, ValueError):
    pass


class BadIndex(MeshError):
    pass


class NonManifoldEdge(MeshError):
    def __init__(self, edge, count):
        self.edge = edge
        self.count = count
        super().__init__(f"edge {edge} has {count} incident faces (expected 2)")


class Disconnected(MeshError):
    pass


class DegenerateFace(DCSError, ValueError):
    """A face is combinatorially or geometrically degenerate.

    Raised for repeated vertex indices at mesh construction, and for faces
    with nonpositive Q value when ordinary (non-extended) angles are needed.
    """

    def __init__(self, face, reason="degenerate"):
        self.face = face
        super().__init__(f"face {face}: {reason}")


class ParseError(DCSError, ValueError):
    def __init__(self, path, lineno, msg):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {msg}")


# weights

class MissingWeight(DCSError, KeyError):
    def __init__(self, what):
        self.what = what
        super().__init__(f"missing weight for {what}")

    def __str__(self):
        return self.args[0]


class CornerNotInFace(DCSError, ValueError):
    pass


class NonpositiveKappa(DCSError, ValueError):
    pass


# geometry kernels

class NonpositiveRadicand(DCSError, ArithmeticError):
    """Euclidean length radicand <= 0, i.e. the edge violates C1."""


class ArgumentNotAboveOne(DCSError, ArithmeticError):
    """Hyperbolic cosh-length < 1, i.e. the edge violates C1."""


class DegenerateTriangle(DCSError, ArithmeticError):
    pass


class DomainError(DCSError, ValueError):
    pass


class NoRealThreshold(DCSError, ArithmeticError):
    pass


# curvature / energy / flow

class ExtendedNotDifferentiable(DCSError, ValueError):
    pass


class PathLeavesAdmissible(DCSError, ArithmeticError):
    pass


class BadTarget(DCSError, ValueError):
    pass


class DegenerateStart(DCSError, ValueError):
    pass


class LineSearchStall(DCSError, RuntimeError):
    def __init__(self, msg="line search stalled; try run_extended_ricci instead"):
        super().__init__(msg)


# oracle

class EvaluationFailed(DCSError, RuntimeError):
    pass


class NotSymmetric(DCSError, ValueError):
    pass
