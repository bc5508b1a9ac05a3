import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from dcstruct import hyper
from dcstruct.errors import ArgumentNotAboveOne, DegenerateTriangle, DomainError
from dcstruct.oracle import brute_q, fd_jacobian, scan_admissible
from dcstruct.sampling import random_face_weights
from dcstruct.weights import g_local, h_local

from conftest import FACE, face_scheme

F_STAR = 0.5 * math.log(1 + math.sqrt(3))

# central differences (step 1e-6) of a plain hyperbolic law-of-cosines oracle in u
FROZEN_OFFDIAG_EPS1 = 0.13363062095761435
FROZEN_OFFDIAG_EPS0 = 0.14907119860740892


def _angles_in_u(eps, eta):
    return lambda u: hyper.angles_local(hyper.f_of_u(u, eps), eps, eta)


def _random_nondegenerate(rng):
    while True:
        eps, eta = random_face_weights(rng)
        f = rng.uniform(-2, 1.5, size=3)
        if hyper.q_local(f, eps, eta) > 1e-2:
            return eps, eta, f


# -- examples ---------------------------------------------------------------

def test_u_of_f_examples():
    assert hyper.u_of_f(0.7, 0) == 0.7
    assert hyper.u_of_f(0.0, 1) == pytest.approx(math.log(math.sqrt(2) - 1), abs=1e-12)
    assert hyper.u_of_f(0.0, 1) == pytest.approx(-math.asinh(1), abs=1e-12)
    assert hyper.f_of_u(-0.8813735870, 1) == pytest.approx(0.0, abs=1e-9)


def test_f_of_u_domain():
    with pytest.raises(DomainError):
        hyper.f_of_u(0.0, 1)
    assert hyper.f_of_u(2.5, 0) == 2.5


@given(st.floats(-20, 20))
def test_u_round_trip_and_monotone(f):
    u = hyper.u_of_f(f, 1)
    assert u < 0
    assert abs(hyper.f_of_u(u, 1) - f) < 1e-12 * max(1.0, abs(f))
    assert hyper.u_of_f(f + 1e-3, 1) > u


@given(st.floats(-5, 5))
def test_df_du_is_c(f):
    u = hyper.u_of_f(f, 1)
    h = 1e-6
    num = (hyper.f_of_u(u + h, 1) - hyper.f_of_u(u - h, 1)) / (2 * h)
    assert num == pytest.approx(float(hyper.df_du(f, 1)), rel=1e-6)


@pytest.mark.parametrize("f, eps, eta, cosh_l", [
    ((0, 0), (0, 0), 1, 2.0),
    ((0, 0), (1, 1), 1, 3.0),
    ((F_STAR, F_STAR), (1, 1), 1, 3 + 2 * math.sqrt(3)),
])
def test_edge_length(f, eps, eta, cosh_l):
    assert hyper.edge_length_h(*f, *eps, eta) == pytest.approx(math.acosh(cosh_l), abs=1e-12)


def test_edge_length_rejects_c1_violation():
    with pytest.raises(ArgumentNotAboveOne):
        hyper.edge_length_h(0, 0, 0, 0, -0.5)


def test_q_value_examples():
    assert hyper.q_value_h(face_scheme(1, 1), FACE, [0, 0, 0]) == pytest.approx(28, rel=1e-12)
    assert hyper.q_value_h(face_scheme(0, 1), FACE, [0, 0, 0]) == pytest.approx(5, rel=1e-12)
    for fi in (-5, -10, -20):
        assert hyper.q_value_h(face_scheme(1, 1), FACE, [fi, 0, 0]) > 0


def test_threshold_none_when_a_is_zero():
    assert hyper.degenerate_interval_h(face_scheme(1, 1), FACE, 0, 0.0, 0.0) is None


def test_threshold_matches_bisection():
    s = face_scheme(1, 2)
    T = hyper.degenerate_interval_h(s, FACE, 0, 0.0, 0.0)
    root = brentq(lambda x: brute_q(s, FACE, "hyperbolic", [x, 0, 0]), -10, 2, xtol=1e-14)
    assert T == pytest.approx(root, abs=1e-9)


def test_threshold_vertex_scaling_corner():
    # eps_q = 0 reduces the threshold to -ln(kappa*)
    eps, eta = np.array([0.0, 1, 1]), np.array([2.0, 1, 1])
    s = face_scheme(eps, eta)
    T = hyper.degenerate_interval_h(s, FACE, 0, 0.2, -0.1)
    k = hyper.kappa_thresholds_local(np.array([0, 0.2, -0.1]), eps, eta)[0]
    assert T == pytest.approx(-math.log(k), rel=1e-14)


@pytest.mark.parametrize("c, theta", [
    (2.0, math.acos(2 / 3)),
    (3.0, math.acos(3 / 4)),
    (3 + 2 * math.sqrt(3), math.pi / 6),
])
def test_angles_equilateral(c, theta):
    np.testing.assert_allclose(hyper.angles_h([c, c, c]), [theta] * 3, atol=1e-12)


def test_angles_reject_bad_lengths():
    with pytest.raises(DegenerateTriangle):
        hyper.angles_h([2.0, 2.0, 20.0])


def test_extended_angles_examples():
    s = face_scheme(1, 1)
    np.testing.assert_allclose(hyper.extended_angles_h(s, FACE, [0, 0, 0]), [math.acos(3 / 4)] * 3,
                               atol=1e-12)
    s2 = face_scheme(1, 2)
    T = hyper.degenerate_interval_h(s2, FACE, 0, 0.0, 0.0)
    np.testing.assert_array_equal(hyper.extended_angles_h(s2, FACE, [T - 1, 0, 0]), [math.pi, 0, 0])
    th = hyper.extended_angles_h(s2, FACE, [T + 1e-6, 0, 0])
    assert abs(th[0] - math.pi) < 1e-2


def test_jacobian_eps1_matches_oracle():
    J = hyper.jacobian_h(face_scheme(1, 1), FACE, [0, 0, 0])
    off = FROZEN_OFFDIAG_EPS1
    np.testing.assert_allclose(J[~np.eye(3, dtype=bool)], off, rtol=1e-7)
    # diagonal is -(cosh l_ij + cosh l_ik) times the off-diagonal = -6 off-diagonal
    np.testing.assert_allclose(np.diag(J), -6 * off, rtol=1e-7)


def test_jacobian_eps0_matches_oracle():
    J = hyper.jacobian_h(face_scheme(0, 1), FACE, [0, 0, 0])
    np.testing.assert_allclose(J[~np.eye(3, dtype=bool)], FROZEN_OFFDIAG_EPS0, rtol=1e-7)
    np.testing.assert_allclose(np.diag(J), -4 * FROZEN_OFFDIAG_EPS0, rtol=1e-7)


def test_jacobian_rejects_degenerate():
    s = face_scheme(1, 2)
    T = hyper.degenerate_interval_h(s, FACE, 0, 0.0, 0.0)
    with pytest.raises(DegenerateTriangle):
        hyper.jacobian_h(s, FACE, [T - 0.5, 0, 0])


def test_face_geom_bundle():
    g = hyper.face_geom_h(face_scheme(1, 1), FACE, [0, 0, 0])
    np.testing.assert_allclose(g.C ** 2 - g.S ** 2, 1.0)
    assert g.G == 4 and not g.degenerate
    assert g.area == pytest.approx(math.pi - 3 * math.acos(3 / 4))


# -- properties -------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_q_identity(seed):
    rng = np.random.default_rng(seed)
    eps, eta = random_face_weights(rng)
    f = rng.uniform(-3, 3, size=(50, 3))
    S, C = hyper.vertex_sc(f, eps)
    kh = np.sum(C / S * h_local(C / S, eps, eta), axis=1) + g_local(eps, eta)
    np.testing.assert_allclose(hyper.q_local(f, eps, eta), kh, rtol=1e-12,
                               atol=1e-12 * np.max(np.abs(kh)))


@given(seeds)
def test_jacobian_matches_finite_differences(seed):
    eps, eta, f = _random_nondegenerate(np.random.default_rng(seed))
    J = hyper.jacobian_local(f, eps, eta)
    num = fd_jacobian(_angles_in_u(eps, eta), hyper.u_of_f(f, eps), 1e-6)
    assert np.max(np.abs(J - num)) < 1e-6 * max(1.0, np.max(np.abs(J)))
    c = hyper.cosh_lengths_local(f, eps, eta)
    # diagonal identity: J_ii + cosh l_ij J_ji + cosh l_ik J_ki = 0
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        assert abs(J[i, i] + c[k] * J[j, i] + c[j] * J[k, i]) < 1e-10


@given(seeds)
def test_jacobian_negative_definite(seed):
    eps, eta, f = _random_nondegenerate(np.random.default_rng(seed))
    assert np.linalg.eigvalsh(hyper.jacobian_local(f, eps, eta))[-1] < 0


@given(seeds)
def test_area_tan_identity(seed):
    eps, eta, f = _random_nondegenerate(np.random.default_rng(seed))
    s = face_scheme(eps, eta)
    A = hyper.face_area_h(s, FACE, f)
    assert A > 0
    assert math.tan(A / 4) ** 2 == pytest.approx(hyper.area_tan_identity(s, FACE, f), rel=1e-9,
                                                 abs=1e-10)


@given(seeds)
def test_area_derivative(seed):
    eps, eta, f = _random_nondegenerate(np.random.default_rng(seed))
    u = hyper.u_of_f(f, eps)
    area = lambda uu: np.array([math.pi - np.sum(_angles_in_u(eps, eta)(uu))])
    num = fd_jacobian(area, u, 1e-6)[0]
    J = hyper.jacobian_local(f, eps, eta)
    c = hyper.cosh_lengths_local(f, eps, eta)
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        expected = (c[k] - 1) * J[j, i] + (c[j] - 1) * J[k, i]
        assert num[i] == pytest.approx(expected, abs=1e-6)


@given(seeds)
def test_angle_decays_at_large_factor(seed):
    rng = np.random.default_rng(seed)
    while True:
        eps, eta = random_face_weights(rng)
        if eps[0] == 1:
            break
    f = np.array([10.0, *rng.uniform(-2, 2, size=2)])
    assert hyper.extended_angles_local(f, eps, eta)[0] < 1e-3


@given(seeds)
def test_length_bounds(seed):
    rng = np.random.default_rng(seed)
    eps_j = float(rng.integers(0, 2))
    lo = -1.0 if eps_j == 1 else 0.0
    eta = rng.uniform(lo, 3.0)
    if eta == lo or (eps_j == 0 and eta <= 0):
        return
    lam, mu = hyper.length_bound_constants(eps_j, eta)
    fi, fj = rng.uniform(-4, 4, size=2)
    Si, Sj = math.exp(fi), math.exp(fj)
    Ci, Cj = math.sqrt(1 + Si * Si), math.sqrt(1 + eps_j * Sj * Sj)
    c = math.cosh(hyper.edge_length_h(fi, fj, 1, eps_j, eta))
    base = Ci * Cj + Si * Sj
    assert lam * base <= c * (1 + 1e-12)
    assert c <= mu * base * (1 + 1e-12)


def test_region_scan_matches_threshold():
    s = face_scheme(1, 2)
    T = hyper.degenerate_interval_h(s, FACE, 0, 0.0, 0.0)
    scan = scan_admissible(s, FACE, "hyperbolic", 0, [0, 0, 0], -6, 3, 1000)
    assert abs(scan.crossings[0] - T) <= scan.grid[1] - scan.grid[0]


def test_brute_q_matches_closed_form(rng):
    for _ in range(200):
        eps, eta = random_face_weights(rng)
        f = rng.uniform(-1, 1, size=3)
        a = brute_q(face_scheme(eps, eta), FACE, "hyperbolic", f)
        assert a == pytest.approx(hyper.q_local(f, eps, eta), rel=1e-8, abs=1e-8)
