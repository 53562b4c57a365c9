from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coulomb5 import hurwitz as hw
from coulomb5 import hyperspherical as hs
from coulomb5.params import PhysParams

u8 = arrays(np.float64, 8, elements=st.floats(-2, 2))


def _x_fields() -> list[hw.Field]:
    """The five components of the map as fields on R^8, from the quadratic forms."""
    out = []
    for Q in hw.QUADRATIC_FORMS:
        out.append(hw.Field(lambda u, Q=Q: complex(u @ Q @ u), 8, lambda u, Q=Q: 2 * Q @ u, lambda u, Q=Q: 2 * Q))
    return out


def test_map_basis_vectors():
    e = np.eye(8)
    np.testing.assert_array_equal(hw.hurwitz_map(e[0]), [1, 0, 0, 0, 0])
    np.testing.assert_array_equal(hw.hurwitz_map(e[4]), [-1, 0, 0, 0, 0])
    np.testing.assert_array_equal(hw.hurwitz_map(e[0] + e[5]), [0, 0, 2, 0, 0])


def test_map_shape_validation():
    with pytest.raises(ValueError):
        hw.hurwitz_map(np.zeros(5))


def test_euler_identity_trivial():
    assert hw.euler_identity_residual(np.zeros(8)) == 0
    rng = np.random.default_rng(3)
    u = rng.standard_normal((100, 8))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    assert hw.euler_identity_residual(u).max() <= 1e-14


def test_euler_identity_sweep():
    u = np.random.default_rng(11).uniform(-2, 2, (10_000, 8))
    res = hw.euler_identity_residual(u) / np.maximum(1, np.sum(u * u, axis=1) ** 2)
    assert res.max() <= 1e-12


@settings(max_examples=200, deadline=None)
@given(u8)
def test_antipodal_and_radius(u):
    np.testing.assert_array_equal(hw.hurwitz_map(-u), hw.hurwitz_map(u))
    np.testing.assert_allclose(np.linalg.norm(hw.hurwitz_map(u)), u @ u, rtol=1e-13, atol=1e-13)


def test_quadratic_forms_reproduce_map():
    u = np.random.default_rng(2).standard_normal(8)
    np.testing.assert_allclose(np.einsum("aij,i,j->a", hw.QUADRATIC_FORMS, u, u), hw.hurwitz_map(u), atol=1e-14)


def test_J_generators_antisymmetric_and_su2():
    A = hw.J_MATRICES
    for m in A:
        np.testing.assert_array_equal(m, -m.T)
    for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        np.testing.assert_array_equal(A[a] @ A[b] - A[b] @ A[a], 2 * A[c])


def test_apply_J_examples():
    c = hw.constant_field(2.5)
    u = np.random.default_rng(4).standard_normal(8)
    for a in (1, 2, 3):
        assert hw.apply_J(a, c, u) == 0
    rot = hw.polynomial_field({(2, 0, 0, 0, 0, 0, 0, 0): 1, (0, 2, 0, 0, 0, 0, 0, 0): 1})
    assert abs(hw.apply_J(1, rot, u)) <= 1e-15
    f = hw.monomial(0, 1)
    assert hw.apply_J(1, f, [1, 1, 0, 0, 0, 0, 0, 0]) == 0
    np.testing.assert_allclose(hw.apply_J(1, f, [2, 1, 0, 0, 0, 0, 0, 0]), -1.5j, atol=1e-15)


def test_apply_J_bad_index():
    with pytest.raises(ValueError):
        hw.apply_J(4, hw.constant_field(), np.ones(8))


@settings(max_examples=50, deadline=None)
@given(u8)
def test_J_annihilates_coordinates(u):
    for f in _x_fields():
        for a in (1, 2, 3):
            assert abs(hw.apply_J(a, f, u)) <= 1e-13 * max(1.0, u @ u)


def test_J_annihilates_pullback_fd():
    """Finite-difference route: J of a non-polynomial function of x vanishes."""
    f5 = hw.Field(lambda x: complex(np.exp(-0.3 * x @ x) * np.cos(x[0] + 2 * x[3])), 5)
    pull = hw.pullback(f5)
    u = np.random.default_rng(9).uniform(-1, 1, 8)
    for a in (1, 2, 3):
        assert abs(hw.apply_J(a, pull, u)) <= 1e-9


def test_commutators_quadratic_monomials():
    rng = np.random.default_rng(5)
    worst = 0.0
    for u in rng.uniform(-1, 1, (3, 8)):
        for f in hw.quadratic_monomials():
            for a in (1, 2, 3):
                for b in (1, 2, 3):
                    worst = max(worst, hw.commutator_residual(a, b, f, u))
    assert worst <= 1e-10


def test_commutator_trivial_cases():
    u = np.random.default_rng(6).standard_normal(8)
    f = hw.monomial(2, 7)
    assert hw.commutator_residual(1, 2, hw.constant_field(), u) == 0
    for a in (1, 2, 3):
        assert hw.commutator_residual(a, a, f, u) == 0


def test_commutators_finite_difference_route():
    f = hw.Field(lambda u: complex(np.sin(u[0] * u[3]) + u[5] ** 3 * u[1]), 8)
    u = np.random.default_rng(8).uniform(-1, 1, 8)
    for a, b in [(1, 2), (2, 3), (3, 1)]:
        assert hw.commutator_residual(a, b, f, u) <= 1e-6


def _r2_field():
    return hw.polynomial_field({tuple(2 * (i == j) for i in range(5)): 1 for j in range(5)}, dim=5)


def test_laplacian_identity_examples():
    u = np.random.default_rng(12).uniform(-1, 1, 8)
    x0 = hw.monomial(0, dim=5)
    assert hw.laplacian_identity_residual(x0, u, "analytic") <= 1e-13
    lap8, rhs = hw.laplacian_identity_terms(_r2_field(), u, "analytic")
    r = u @ u
    # Delta_8 |u|^4 = (8 + 2) * 4 |u|^2 = 40 r = 4 r * 10
    np.testing.assert_allclose(lap8, 40 * r, rtol=1e-13)
    np.testing.assert_allclose(rhs, 40 * r, rtol=1e-13)


def test_laplacian_identity_fd_sweep():
    rng = np.random.default_rng(13)
    fields = [hw.monomial(1, dim=5), hw.monomial(0, dim=5), _r2_field(), hw.monomial(1, 2, dim=5)]
    for _ in range(20):
        u = rng.standard_normal(8)
        u *= rng.uniform(0.5, 2) / np.linalg.norm(u)
        for f in fields:
            assert hw.laplacian_identity_residual(f, u, "fd") <= 1e-7


def test_laplacian_identity_nonpolynomial():
    f5 = hw.Field(lambda x: complex(np.cos(x[0]) * np.exp(0.2 * x[2] - 0.1 * x[4] ** 2)), 5, scale=1.0)
    u = np.random.default_rng(14).uniform(-0.6, 0.6, 8)
    lap8, rhs = hw.laplacian_identity_terms(f5, u, "fd")
    assert abs(lap8 - rhs) <= 1e-6 * max(abs(lap8), 1.0)


def test_laplacian_identity_singular():
    with pytest.raises(hw.SingularPointError):
        hw.laplacian_identity_residual(hw.monomial(0, dim=5), np.zeros(8))
    with pytest.raises(ValueError):
        hw.laplacian_identity_residual(hw.Field(lambda x: 0j, 5), np.ones(8), "analytic")


def test_duality_params_relations():
    p = PhysParams(a=2.0, k=0.7)
    d = hw.DualityParams.from_coulomb(p)
    np.testing.assert_allclose(d.eps, d.mu * d.omega**2 / 8, rtol=1e-15)
    np.testing.assert_allclose(d.E, 4 * d.e2, rtol=1e-15)
    back = d.coulomb_params()
    np.testing.assert_allclose([back.a, back.k], [p.a, p.k], rtol=1e-14)
    o = hw.DualityParams.from_oscillator(omega=3.0, E=2.0)
    assert o.eps == 9.0 / 8 and o.e2 == 0.5


def test_duality_zero_function():
    d = hw.DualityParams.from_coulomb(PhysParams())
    assert hw.duality_residual(lambda x: 0j, d, np.ones(8)) == 0


@pytest.mark.parametrize("a,k", [(1.0, 1.0), (0.5, 2.0), (3.0, 0.6)])
def test_duality_hyperspherical_ground_partial_wave(a, k):
    p = PhysParams(a=a, k=k)
    psi5 = hs.basis_cartesian(k, hs.HyperLabel(0), p)
    d = hw.DualityParams.from_coulomb(p)
    rng = np.random.default_rng(15)
    for _ in range(10):
        u = rng.standard_normal(8)
        u *= rng.uniform(0.5, 2) / np.linalg.norm(u)
        assert hw.duality_residual(psi5, d, u) <= 1e-5


def test_duality_detects_wrong_energy():
    p = PhysParams(a=1.0, k=1.0)
    psi5 = hs.basis_cartesian(1.0, hs.HyperLabel(0), p)
    d = hw.DualityParams.from_coulomb(p)
    wrong = hw.DualityParams(d.omega, 1.5 * d.E, d.eps, d.e2)
    u = np.full(8, 0.4)
    assert hw.duality_residual(psi5, wrong, u) > 1e-2


def test_parity_of_pulled_back_state():
    p = PhysParams()
    psi5 = hs.basis_cartesian(1.0, hs.HyperLabel(0), p)
    u = np.random.default_rng(16).standard_normal(8)
    assert psi5(hw.hurwitz_map(-u)) == psi5(hw.hurwitz_map(u))


def test_duality_J_term_coefficient():
    """For J > 0 the kinetic term gains (hbar^2/2mu)(4/r) J(J+1) psi."""
    p = PhysParams()
    psi5 = hs.basis_cartesian(1.0, hs.HyperLabel(0), p)
    d = hw.DualityParams.from_coulomb(p)
    u = np.full(8, 0.35)
    t0 = hw.duality_terms(psi5, d, u)
    t1 = hw.duality_terms(psi5, d, u, J=0.5)
    r = u @ u
    np.testing.assert_allclose(t1["kinetic"] - t0["kinetic"], 0.5 * 4 / r * 0.75 * t0["psi"], rtol=1e-12)
