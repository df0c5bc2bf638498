import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plapflow import (
    GridFunction,
    Mesh1D,
    ProblemParams,
    apply_Ap,
    energy_Jp,
    energy_tilde_Ep,
    grad_tilde_Ep,
    inner_l2,
    norm_l2,
    norm_V_p,
    rhs_B,
)
from plapflow.operators import jacobian_bands

from conftest import dense_laplacian

MESH = Mesh1D(np.pi, 15)
vals = st.lists(st.floats(-10, 10, allow_nan=False), min_size=15, max_size=15)
exps = st.floats(2.0, 8.0)


def fd_directional(f, u, d, eps):
    return (f(u + eps * d) - f(u - eps * d)) / (2 * eps)


def test_apply_Ap_zero_and_eigenvector(basis):
    assert np.all(apply_Ap(basis.mesh.zeros(), 3.0).values == 0)
    phi = basis.phi(1)
    np.testing.assert_allclose(apply_Ap(phi, 2.0).values, basis.eigenvalues[0] * phi.values, rtol=1e-10, atol=1e-12)


def test_apply_Ap_p2_is_three_point_stencil(rng):
    u = MESH.random(rng)
    np.testing.assert_allclose(apply_Ap(u, 2.0).values, dense_laplacian(MESH) @ u.values, rtol=1e-12, atol=1e-10)


def test_apply_Ap_rejects_small_p():
    with pytest.raises(ValueError):
        apply_Ap(MESH.zeros(), 1.9)


@settings(max_examples=200)
@given(vals, exps)
def test_pairing_equals_V_norm_power(a, p):
    u = GridFunction(MESH, a)
    lhs = inner_l2(apply_Ap(u, p), u)
    rhs = norm_V_p(u, p) ** p
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


@settings(max_examples=200)
@given(vals, vals, exps)
def test_tartar_monotonicity(a, b, p):
    u, v = GridFunction(MESH, a), GridFunction(MESH, b)
    pairing = inner_l2(apply_Ap(u, p) - apply_Ap(v, p), u - v)
    bound = 2.0 ** (2 - p) * norm_V_p(u - v, p) ** p
    assert pairing >= bound - 1e-10 * max(1.0, abs(pairing))


def test_energy_Jp_examples(rng):
    u = MESH.random(rng)
    assert energy_Jp(MESH.zeros(), 3.0) == 0.0
    for p in (2.0, 3.0, 4.5):
        assert energy_Jp(1.7 * u, p) == pytest.approx(1.7**p * energy_Jp(u, p), rel=1e-12)


@pytest.mark.parametrize("p", [2.0, 2.5, 3.0, 4.0, 6.0])
def test_energy_Jp_gradient_is_Ap(rng, p):
    u = MESH.random(rng)
    d = MESH.random(rng)
    fd = fd_directional(lambda w: energy_Jp(w, p), u, d, 1e-6)
    exact = inner_l2(apply_Ap(u, p), d)
    assert fd == pytest.approx(exact, rel=1e-6)


def test_energy_Jp_convex_along_segments(rng):
    for _ in range(20):
        u, v = MESH.random(rng), MESH.random(rng)
        p = rng.uniform(2, 6)
        mid = energy_Jp(0.5 * u + 0.5 * v, p)
        assert mid <= 0.5 * energy_Jp(u, p) + 0.5 * energy_Jp(v, p) + 1e-12


def test_tilde_energy_examples(rng):
    g = MESH.random(rng)
    prm = ProblemParams(3.0, 1.3, g)
    assert energy_tilde_Ep(MESH.zeros(), prm) == 0.0
    u = MESH.random(rng)
    assert energy_tilde_Ep(u, ProblemParams(3.0, 0.0, MESH.zeros())) == energy_Jp(u, 3.0)


def test_tilde_energy_even_without_forcing(rng):
    u = MESH.random(rng)
    prm = ProblemParams(3.3, 2.0, MESH.zeros())
    assert energy_tilde_Ep(u, prm) == pytest.approx(energy_tilde_Ep(-u, prm), rel=1e-14)


@pytest.mark.parametrize("p", [2.0, 2.5, 3.0, 4.0])
def test_grad_tilde_Ep_matches_finite_differences(rng, p):
    prm = ProblemParams(p, 1.7, MESH.random(rng))
    u = MESH.random(rng)
    grad = grad_tilde_Ep(u, prm)
    for j in range(5):
        d = MESH.random(rng)
        fd = fd_directional(lambda w: energy_tilde_Ep(w, prm), u, d, 1e-6)
        assert fd == pytest.approx(inner_l2(grad, d), rel=1e-6)


def test_grad_tilde_Ep_linear_case_against_matrix(rng):
    g = MESH.random(rng)
    prm = ProblemParams(2.0, 0.8, g)
    u = MESH.random(rng)
    expected = (dense_laplacian(MESH) - 0.8 * np.eye(MESH.n)) @ u.values - g.values
    np.testing.assert_allclose(grad_tilde_Ep(u, prm).values, expected, rtol=1e-12, atol=1e-10)
    assert np.all(grad_tilde_Ep(MESH.zeros(), ProblemParams(2.0, 0.8, MESH.zeros())).values == 0)


@pytest.mark.parametrize("p", [2.0, 2.3, 3.0, 5.0])
def test_jacobian_bands_match_finite_differences(rng, p):
    u = MESH.random(rng)
    diag, off = jacobian_bands(u.values, MESH.h, p)
    J = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    eps = 1e-6
    fd = np.empty((MESH.n, MESH.n))
    for i in range(MESH.n):
        e = np.zeros(MESH.n)
        e[i] = eps
        up = apply_Ap(GridFunction(MESH, u.values + e), p).values
        um = apply_Ap(GridFunction(MESH, u.values - e), p).values
        fd[:, i] = (up - um) / (2 * eps)
    np.testing.assert_allclose(J, fd, rtol=1e-5, atol=1e-5 * np.abs(J).max())


def test_flux_vanishes_on_flat_faces():
    m = Mesh1D(1.0, 5)
    u = GridFunction(m, [1.0, 1.0, 1.0, 1.0, 1.0])
    out = apply_Ap(u, 2.5).values
    assert np.all(np.isfinite(out))
    assert out[2] == 0.0


def test_rhs_B_examples(rng):
    g = MESH.random(rng)
    u = MESH.random(rng)
    assert rhs_B(MESH.zeros(), ProblemParams(3.0, 2.0, g)) == g
    assert rhs_B(u, ProblemParams(3.0, 0.0, g)) == g
    assert rhs_B(u, ProblemParams(3.0, 1.0, MESH.zeros())) == u
