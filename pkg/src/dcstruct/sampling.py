"""Random admissible schemes and factors for property checks."""

import numpy as np

from .weights import WeightScheme, a_local, gamma_local

__all__ = ["random_face_weights", "random_surface_scheme", "random_factors"]


def _admissible(eps, eta):
    c1 = np.roll(eps, -1) * np.roll(eps, -2) + eta > 0
    return bool(np.all(c1) and np.all(gamma_local(eps, eta) >= 0))


def random_face_weights(rng, eta_range=(-1.0, 3.0), need_degenerate_corner=False, tries=10000):
    """(eps, eta) local arrays of one face satisfying both structure conditions."""
    for _ in range(tries):
        eps = rng.integers(0, 2, size=3).astype(float)
        eta = rng.uniform(*eta_range, size=3)
        if not _admissible(eps, eta):
            continue
        if need_degenerate_corner and not np.any(a_local(eps, eta) > 0):
            continue
        return eps, eta
    raise RuntimeError("could not sample admissible face weights")


def random_surface_scheme(surface, rng, eta_range=(0.05, 3.0), p_zero=0.5):
    """Scheme with random eps in {0, 1} and positive eta (always admissible)."""
    eps = (rng.random(surface.vertex_count) >= p_zero).astype(float)
    eta = {e: float(rng.uniform(*eta_range)) for e in surface.edges}
    return WeightScheme(eps, eta)


def random_factors(rng, n, background, spread=1.0):
    """Factors f; hyperbolic factors are drawn the same way (any real f is valid)."""
    return rng.uniform(-spread, spread, size=n)
