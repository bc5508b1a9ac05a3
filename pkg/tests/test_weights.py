import numpy as np
import pytest
from hypothesis import given, strategies as st

from dcstruct.errors import CornerNotInFace, MissingWeight, NonpositiveKappa
from dcstruct.sampling import random_face_weights
from dcstruct.surface import octahedron, tetrahedron
from dcstruct.weights import (WeightScheme, a_local, corner_gamma, g_local, g_term, gamma_local,
                              h_values, uniform_scheme, validate_scheme)

from conftest import FACE, face_scheme


def test_uniform_schemes_admissible():
    t = tetrahedron()
    assert validate_scheme(t, uniform_scheme(t, 1, 1)).ok
    o = octahedron()
    assert validate_scheme(o, uniform_scheme(o, 1, 2)).ok


def test_c1_violation_reported_on_edge():
    t = tetrahedron()
    s = uniform_scheme(t, 0, 1)
    s.eta[(0, 1)] = -0.5
    report = validate_scheme(t, s)
    assert [e for e, _ in report.c1] == [(0, 1)]
    assert len(report) >= 1 and not report.ok


def test_c2_violation_names_corner():
    t = tetrahedron()
    s = uniform_scheme(t, 0, 1)
    s.eta[(0, 1)] = -0.5
    report = validate_scheme(t, s)
    # corner 2 of face (0, 1, 2): 0 * eta_01 + eta_02 eta_12 = 1 >= 0, corner 0: eta_01 eta_02 < 0
    corners = {(fid, q) for fid, q, _ in report.c2}
    assert (0, 0) in corners and (0, 1) in corners
    assert any("corner 0" in line for line in report.lines())


def test_missing_eta_and_epsilon():
    t = tetrahedron()
    s = uniform_scheme(t, 1, 1)
    del s.eta[(2, 3)]
    with pytest.raises(MissingWeight, match=r"\(2, 3\)"):
        validate_scheme(t, s)
    with pytest.raises(MissingWeight):
        validate_scheme(t, WeightScheme(np.ones(3), {e: 1.0 for e in t.edges}))


def test_eta_keys_symmetric():
    s = WeightScheme([1, 1, 1], {(2, 1): 3.0, (0, 2): 1.0, (1, 0): 1.0})
    assert s.eta_of(1, 2) == s.eta_of(2, 1) == 3.0


def test_epsilon_must_be_binary():
    with pytest.raises(ValueError):
        WeightScheme([1, -1, 0], {})


@pytest.mark.parametrize("eps, eta, expected", [(1, 1, 2.0), (0, 1, 1.0), (1, 2, 6.0)])
def test_corner_gamma(eps, eta, expected):
    assert corner_gamma(face_scheme(eps, eta), FACE, 1) == expected


def test_corner_not_in_face():
    with pytest.raises(CornerNotInFace):
        corner_gamma(face_scheme(1, 1), FACE, 7)


@pytest.mark.parametrize("eps, eta, kappa, expected", [
    (1, 1, (1, 1, 1), (4, 4, 4)),
    (1, 2, (5, 1, 1), (-3, 33, 33)),
    (0, 1, (1, 1, 1), (1, 1, 1)),
])
def test_h_values(eps, eta, kappa, expected):
    np.testing.assert_allclose(h_values(kappa, face_scheme(eps, eta), FACE), expected, atol=1e-12)


def test_h_values_needs_positive_kappa():
    with pytest.raises(NonpositiveKappa):
        h_values((1, 0, 1), face_scheme(1, 1), FACE)


def test_g_term_examples():
    assert g_term(face_scheme(1, 1), FACE) == 4.0
    assert g_term(face_scheme(0, 1), FACE) == 2.0


def _weights(seed):
    return random_face_weights(np.random.default_rng(seed))


@given(st.integers(0, 2**32 - 1))
def test_at_most_one_nonpositive_h(seed):
    eps, eta = _weights(seed)
    rng = np.random.default_rng(seed + 1)
    kappa = 10.0 ** rng.uniform(-3, 3, size=(200, 3))
    from dcstruct.weights import h_local
    h = h_local(kappa, eps, eta)
    assert np.all(np.sum(h <= 0, axis=1) <= 1)


@given(st.integers(0, 2**32 - 1))
def test_gamma_nonnegative_when_admissible(seed):
    eps, eta = _weights(seed)
    assert np.all(gamma_local(eps, eta) >= 0)


@given(st.integers(0, 2**32 - 1))
def test_g_positive_when_some_corner_can_degenerate(seed):
    eps, eta = random_face_weights(np.random.default_rng(seed), need_degenerate_corner=True)
    assert np.any(a_local(eps, eta) > 0)
    assert g_local(eps, eta) > 0
