import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plapflow import (
    GridFunction,
    Mesh1D,
    ProblemParams,
    SolverConfig,
    detect_equator_limit,
    default_ic_net,
    dist_to_A2,
    hausdorff_semidist,
    inner_l2,
    laplacian_eigs,
    norm_l2,
    normalized_state,
    poincare_project,
    sample_attractor_p,
    solve_equilibrium_2,
    solve_equilibrium_p,
    solve_p2_exact,
    sweep_equilibrium_continuity,
    upper_semicontinuity_experiment,
)
from plapflow.asymptotics import load_attractor_sample, save_attractor_sample

MESH = Mesh1D(np.pi, 31)
BASIS = laplacian_eigs(MESH)
L1, L2, L3 = BASIS.eigenvalues[:3]
vals = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=31, max_size=31)


def test_normalized_state_examples(rng):
    phi = BASIS.phi(1)
    np.testing.assert_allclose(normalized_state(3 * phi).values, phi.values, atol=1e-14)
    np.testing.assert_allclose(normalized_state(phi).values, phi.values, atol=1e-14)
    with pytest.raises(ValueError):
        normalized_state(MESH.zeros())


@given(vals, st.integers(1, 31))
def test_normalized_distance_identity(a, j):
    u = GridFunction(MESH, a)
    if norm_l2(u) == 0:
        return
    lhs = norm_l2(normalized_state(u) - BASIS.phi(j)) ** 2
    rhs = 2 - 2 * BASIS.analyze(u)[j] / norm_l2(u)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_poincare_examples():
    pole = poincare_project(MESH.zeros())
    assert pole.s == 1.0 and norm_l2(pole.v) == 0
    unit = poincare_project(BASIS.phi(2))
    assert unit.s == pytest.approx(2**-0.5, rel=1e-14)
    for k, tol in ((10, 0.1), (100, 0.01), (1000, 0.001)):
        pt = poincare_project(k * BASIS.phi(1))
        assert pt.s < tol
        assert norm_l2(pt.v - BASIS.phi(1)) < tol**2


@given(vals)
def test_poincare_on_hemisphere(a):
    pt = poincare_project(GridFunction(MESH, a))
    assert norm_l2(pt.v) ** 2 + pt.s**2 == pytest.approx(1.0, abs=1e-12)
    assert pt.s > 0


@given(vals, vals)
def test_poincare_injective(a, b):
    u, v = GridFunction(MESH, a), GridFunction(MESH, b)
    if u == v:
        return
    pu, pv = poincare_project(u), poincare_project(v)
    assert pu.s != pv.s or not np.array_equal(pu.v.values, pv.v.values)


def test_equator_limit_first_mode():
    lam = 0.5 * (L1 + L2)
    prm = ProblemParams(2.0, lam, BASIS.phi(1))
    res = []
    for T in (15.0, 25.0):
        traj = solve_p2_exact(MESH.zeros(), prm, np.linspace(0, T, 201), BASIS)
        out = detect_equator_limit(traj, BASIS)
        assert out.k == 1
        res.append(out.residual)
    assert res[1] <= res[0] < 1e-6


def test_equator_limit_second_mode():
    lam = 0.5 * (L2 + L3)
    prm = ProblemParams(2.0, lam, BASIS.phi(2))
    traj = solve_p2_exact(BASIS.phi(2), prm, np.linspace(0, 7, 71), BASIS)
    out = detect_equator_limit(traj, BASIS)
    assert out.k == 2 and out.residual < 1e-6


def test_rounding_level_first_mode_takes_over():
    # phi_2 carries ~1e-17 of mode 1 after rounding; that mode grows faster and wins eventually
    lam = 0.5 * (L2 + L3)
    prm = ProblemParams(2.0, lam, BASIS.phi(2))
    assert BASIS.analyze(BASIS.phi(2))[1] != 0.0
    traj = solve_p2_exact(BASIS.phi(2), prm, np.linspace(0, 25, 251), BASIS)
    assert detect_equator_limit(traj, BASIS).k == 1


def test_equator_limit_bounded():
    prm = ProblemParams(2.0, 0.5 * L1, BASIS.phi(1))
    traj = solve_p2_exact(10 * BASIS.phi(3), prm, np.linspace(0, 20, 101), BASIS)
    assert detect_equator_limit(traj, BASIS) == "bounded"


def test_equator_limit_too_short():
    prm = ProblemParams(2.0, 0.5 * (L1 + L2), BASIS.phi(1))
    traj = solve_p2_exact(MESH.zeros(), prm, np.linspace(0, 6, 7), BASIS)
    with pytest.raises(ValueError):
        detect_equator_limit(traj, BASIS)


def test_higher_modes_dominated():
    lam = 0.5 * (L2 + L3)
    prm = ProblemParams(2.0, lam, BASIS.phi(1) + BASIS.phi(2))
    traj = solve_p2_exact(MESH.zeros(), prm, [0.0, 10.0], BASIS)
    c = BASIS.analyze(traj.final)
    assert abs(c[2] / c[1]) < 1e-6
    # normalized-state identity along the orbit
    w = normalized_state(traj.final)
    assert norm_l2(w - BASIS.phi(1)) ** 2 == pytest.approx(2 - 2 * c[1] / norm_l2(traj.final), abs=1e-12)


def test_hausdorff_examples(rng):
    A = [MESH.random(rng) for _ in range(5)]
    assert hausdorff_semidist(A, A) == 0
    assert hausdorff_semidist([MESH.zeros()], [BASIS.phi(1)]) == pytest.approx(1.0, rel=1e-13)
    B = A + [10 * BASIS.phi(1)]
    assert hausdorff_semidist(A, B) == 0
    assert hausdorff_semidist(B, A) > 0
    with pytest.raises(ValueError):
        hausdorff_semidist([], A)


def test_hausdorff_brute_force(rng):
    A = [MESH.random(rng) for _ in range(7)]
    B = [MESH.random(rng) for _ in range(4)]
    brute = max(min(norm_l2(a - b) for b in B) for a in A)
    assert hausdorff_semidist(A, B) == pytest.approx(brute, rel=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_hausdorff_triangle(seed):
    r = np.random.default_rng(seed)
    A, B, C = ([MESH.random(r, scale=r.uniform(0.1, 5)) for _ in range(r.integers(1, 6))] for _ in range(3))
    assert hausdorff_semidist(A, C) <= hausdorff_semidist(A, B) + hausdorff_semidist(B, C) + 1e-12


def test_dist_to_A2_examples(rng):
    lam = 0.5 * (L1 + L2)
    assert dist_to_A2(BASIS.phi(1), BASIS, lam) < 1e-14
    assert dist_to_A2(BASIS.phi(2), BASIS, lam) == pytest.approx(1.0, rel=1e-12)
    u2 = MESH.random(rng)
    assert dist_to_A2(u2, BASIS, 0.5 * L1, u2) == 0
    with pytest.raises(ValueError):
        dist_to_A2(u2, BASIS, 0.5 * L1)


def test_dist_to_A2_against_projection(rng):
    lam = 0.5 * (L3 + BASIS.eigenvalues[3])
    u = MESH.random(rng)
    proj = sum((inner_l2(u, BASIS.phi(j)) * BASIS.phi(j) for j in (1, 2, 3)), MESH.zeros())
    assert dist_to_A2(u, BASIS, lam) == pytest.approx(norm_l2(u - proj), rel=1e-10)


def test_default_ic_net():
    net = default_ic_net(MESH, seed=3)
    assert len(net) == 32
    assert net[0] == 0.5 * BASIS.phi(1) and net[1] == -0.5 * BASIS.phi(1)
    assert all(a == b for a, b in zip(net, default_ic_net(MESH, seed=3)))


def test_attractor_sample_trivial_for_negative_lambda(rng):
    prm = ProblemParams(3.0, -1.0, MESH.random(rng))
    eq = solve_equilibrium_p(prm)
    net = default_ic_net(MESH, seed=1)[::3]
    sample = sample_attractor_p(prm, net, 30.0, SolverConfig(tau=0.05))
    assert all(norm_l2(u - eq.state) < 1e-4 for u in sample.states)
    assert sample.v_norm_bound > 0


def test_attractor_sample_deterministic():
    prm = ProblemParams(2.5, 0.5 * (L1 + L2), BASIS.phi(1))
    net = default_ic_net(MESH, seed=2)[::4]
    cfg = SolverConfig(tau=0.02)
    a = sample_attractor_p(prm, net, 2.0, cfg)
    b = sample_attractor_p(prm, net, 2.0, cfg, workers=3)
    assert all(np.array_equal(x.values, y.values) for x, y in zip(a.states, b.states))
    assert a.v_norm_bound == b.v_norm_bound


@pytest.mark.xfail(
    strict=True,
    reason="for lambda > lambda_1 the equilibria grow without bound as p -> 2+, so no p-uniform V-norm band exists",
)
def test_attractor_v_norm_uniform_band():
    prm = ProblemParams(3.0, 0.5 * (L1 + L2), BASIS.phi(1))
    net = default_ic_net(MESH, seed=0)
    cfg = SolverConfig(tau=0.02)
    ref = sample_attractor_p(prm, net, 30.0, cfg)
    low = sample_attractor_p(prm.with_p(2.5), net, 30.0, cfg)
    assert np.isfinite(low.v_norm_bound)
    assert low.v_norm_bound <= 1.5 * ref.v_norm_bound


def test_semicontinuity_below_first_eigenvalue():
    prm = ProblemParams(2.5, 0.0, BASIS.phi(1))
    p_list = [2.5, 2.25, 2.125]
    net = default_ic_net(MESH, seed=0)[::4]
    rows = upper_semicontinuity_experiment(p_list, prm, net, 40.0, SolverConfig(tau=0.05))
    u2 = solve_equilibrium_2(prm.with_p(2.0)).state
    dists = [d for _, d, _ in rows]
    assert all(len(s.states) == len(net) for _, _, s in rows)
    assert np.all(np.diff(dists) < 0)
    for p, d, s in rows:
        ustar = solve_equilibrium_p(prm.with_p(p), u2).state
        assert d == pytest.approx(norm_l2(ustar - u2), rel=1e-3)


def test_attractor_sample_roundtrip(tmp_path):
    prm = ProblemParams(3.0, 1.0, BASIS.phi(1))
    s = sample_attractor_p(prm, default_ic_net(MESH)[:3], 0.5, SolverConfig(tau=0.05))
    save_attractor_sample(s, tmp_path / "s")
    back = load_attractor_sample(tmp_path / "s", BASIS.phi(1))
    assert back.params == s.params and back.transient_time == 0.5
    assert back.v_norm_bound == s.v_norm_bound
    assert all(a == b for a, b in zip(back.states, s.states))
