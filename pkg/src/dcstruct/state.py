"""Per-vertex conformal factors together with their background geometry."""

from dataclasses import dataclass

import numpy as np

from . import euclid, hyper

__all__ = ["ConformalState", "EUCLIDEAN", "HYPERBOLIC", "check_background", "kernels"]

EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"


def check_background(background):
    if background not in (EUCLIDEAN, HYPERBOLIC):
        raise ValueError(f"background must be {EUCLIDEAN!r} or {HYPERBOLIC!r}, got {background!r}")
    return background


class _Kernels:
    """Face kernels of one background, all taking factors f of shape (..., 3)."""

    def __init__(self, background):
        self.background = background
        if background == EUCLIDEAN:
            self.q = lambda f, e, w: euclid.q_local(np.exp(f), e, w)
            self.angles = lambda f, e, w: euclid.angles_local(np.exp(f), e, w)
            self.extended_angles = lambda f, e, w: euclid.extended_angles_local(np.exp(f), e, w)
            self.jacobian = lambda f, e, w: euclid.jacobian_local(np.exp(f), e, w)
            self.corner = lambda f, e, w: euclid.degenerate_corner(np.exp(f), e, w)
        else:
            self.q = hyper.q_local
            self.angles = hyper.angles_local
            self.extended_angles = hyper.extended_angles_local
            self.jacobian = hyper.jacobian_local
            self.corner = hyper.degenerate_corner

    def f_of_u(self, u, eps):
        return np.asarray(u, dtype=float) if self.background == EUCLIDEAN else hyper.f_of_u(u, eps)

    def u_of_f(self, f, eps):
        return np.asarray(f, dtype=float) if self.background == EUCLIDEAN else hyper.u_of_f(f, eps)


_KERNELS = {b: _Kernels(b) for b in (EUCLIDEAN, HYPERBOLIC)}


def kernels(background):
    return _KERNELS[check_background(background)]


@dataclass(frozen=True)
class ConformalState:
    """Background tag, factors f and the scheme coefficients they are read with."""

    background: str
    f: np.ndarray
    epsilon: np.ndarray

    def __post_init__(self):
        check_background(self.background)
        f = np.array(self.f, dtype=float)
        eps = np.array(self.epsilon, dtype=float)
        if f.shape != eps.shape:
            raise ValueError(f"f has shape {f.shape}, epsilon {eps.shape}")
        f.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def from_u(cls, background, u, epsilon):
        return cls(background, kernels(background).f_of_u(u, epsilon), epsilon)

    @classmethod
    def from_radii(cls, r, epsilon):
        return cls(EUCLIDEAN, np.log(np.asarray(r, dtype=float)), epsilon)

    @property
    def u(self):
        return kernels(self.background).u_of_f(self.f, self.epsilon)

    @property
    def r(self):
        return np.exp(self.f)

    @property
    def S(self):
        return np.exp(self.f)

    @property
    def C(self):
        return np.sqrt(1.0 + self.epsilon * np.exp(2.0 * self.f))

    @property
    def kappa(self):
        if self.background == EUCLIDEAN:
            return np.exp(-self.f)
        return self.C / self.S

    def __len__(self):
        return len(self.f)
