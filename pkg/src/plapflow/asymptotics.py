"""Behaviour at infinity and attractor comparisons.

Unbounded linear orbits are studied through their normalised direction and
through the Poincare map onto the upper unit hemisphere of ``H x R``.  The
non-compact linear attractor is kept as a description (the span of the first
``N(lam)`` eigenvectors plus the bounded equilibrium), so distances to it are
exact orthogonal projections rather than point-cloud searches.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .equilibria import EquilibriumError, solve_equilibrium_2
from .evolution import SolverConfig, evolve
from .grid import GridFunction, Mesh1D, load_grid_function, norm_l2, norm_V_p, save_grid_function
from .operators import ProblemParams
from .spectral import SpectralBasis, count_N_lambda, laplacian_eigs

__all__ = [
    "PoincarePoint",
    "AttractorSample",
    "EquatorLimit",
    "normalized_state",
    "poincare_project",
    "detect_equator_limit",
    "hausdorff_semidist",
    "dist_to_A2",
    "default_ic_net",
    "sample_attractor_p",
    "upper_semicontinuity_experiment",
    "save_attractor_sample",
    "load_attractor_sample",
]


@dataclass(frozen=True)
class PoincarePoint:
    v: GridFunction
    s: float


@dataclass(frozen=True, eq=False)
class AttractorSample:
    params: ProblemParams
    states: list = field(repr=False)
    transient_time: float
    # largest V-norm over the states (dissipativity diagnostic)
    v_norm_bound: float


@dataclass(frozen=True)
class EquatorLimit:
    k: int
    residual: float


def normalized_state(u: GridFunction) -> GridFunction:
    nu = norm_l2(u)
    if nu == 0:
        raise ValueError("cannot normalise the zero state")
    return u / nu


def poincare_project(u: GridFunction) -> PoincarePoint:
    """``(u, 1) / sqrt(||u||^2 + 1)``; the image lies on the unit hemisphere."""
    r = np.hypot(norm_l2(u), 1.0)
    return PoincarePoint(u / r, 1.0 / r)


def detect_equator_limit(
    traj, basis: SpectralBasis, growth: float = 1e3, fraction: float = 0.5, min_samples: int = 10
):
    """Direction at infinity of a (linear) orbit, or ``"bounded"``.

    The orbit counts as unbounded once ``||u(t)||`` exceeds ``growth`` times
    ``max(||u(0)||, 1)``.  The reported index is the smallest mode whose
    coefficient at the final time carries at least ``fraction`` of the norm;
    the residual is ``min_sign ||u(T)/||u(T)|| -+ phi_k||``.
    """
    norms = np.array([norm_l2(u) for u in traj.states])
    threshold = growth * max(norms[0], 1.0)
    past = np.nonzero(norms > threshold)[0]
    if len(past) == 0:
        return "bounded"
    if len(past) < min_samples:
        raise ValueError(
            f"only {len(past)} samples past the divergence threshold; need {min_samples}"
        )
    uT = traj.final
    c = basis.analyze(uT).coeffs
    share = np.abs(c) / norms[-1]
    candidates = np.nonzero(share >= fraction)[0]
    k = int(candidates[0]) + 1 if len(candidates) else int(np.argmax(share)) + 1
    w = normalized_state(uT)
    phi = basis.phi(k)
    residual = min(norm_l2(w - phi), norm_l2(w + phi))
    return EquatorLimit(k, residual)


def _stack(A) -> np.ndarray:
    A = list(A)
    if not A:
        raise ValueError("empty set")
    mesh = A[0].mesh
    if any(a.mesh != mesh for a in A):
        raise ValueError("set members on different meshes")
    return np.array([a.values for a in A]), mesh


def hausdorff_semidist(A, B) -> float:
    """``max_a min_b ||a - b||``; not symmetric."""
    a, ma = _stack(A)
    b, mb = _stack(B)
    if ma != mb:
        raise ValueError("sets live on different meshes")
    d2 = np.sum(a * a, 1)[:, None] + np.sum(b * b, 1)[None, :] - 2.0 * a @ b.T
    # cancellation can leave tiny negatives, and loses accuracy near 0; recompute the argmins exactly
    idx = np.argmin(d2, axis=1)
    exact = np.linalg.norm(a - b[idx], axis=1)
    return float(np.sqrt(ma.h) * np.max(exact))


def dist_to_A2(u: GridFunction, basis: SpectralBasis, lam: float, u2_star: GridFunction | None = None) -> float:
    """Distance from ``u`` to ``span{phi_1..phi_N(lam)} U {u2_star}``."""
    N = count_N_lambda(lam, basis)
    if N == 0 and u2_star is None:
        raise ValueError("attractor description is empty: N(lambda) = 0 and no equilibrium given")
    cands = []
    if N > 0:
        c = basis.analyze(u).coeffs
        cands.append(float(np.sqrt(max(np.sum(c[N:] ** 2), 0.0))))
    if u2_star is not None:
        cands.append(norm_l2(u - u2_star))
    return min(cands)


def default_ic_net(mesh: Mesh1D, seed: int = 0, basis: SpectralBasis | None = None) -> list[GridFunction]:
    """``+-c phi_j`` for ``j <= 4``, ``c in {0.5, 1, 2}``, then 8 seeded random states."""
    basis = basis or laplacian_eigs(mesh)
    net = []
    for j in range(1, min(4, basis.size) + 1):
        for c in (0.5, 1.0, 2.0):
            net.append(c * basis.phi(j))
            net.append(-c * basis.phi(j))
    rng = np.random.default_rng(seed)
    for _ in range(8):
        net.append(mesh.random(rng))
    return net


def _run_map(fn, items, workers: int):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def sample_attractor_p(
    params: ProblemParams, ic_net, transient_time: float, cfg: SolverConfig, workers: int = 1
) -> AttractorSample:
    """Evolve every initial condition to ``transient_time`` and keep the end states."""
    if not params.p > 2.0:
        raise ValueError(f"attractor sampling needs p > 2, got {params.p}")
    run_cfg = SolverConfig(
        tau=cfg.tau,
        t_final=transient_time,
        newton_tol=cfg.newton_tol,
        max_newton_iters=cfg.max_newton_iters,
        record_every=max(1, int(round(transient_time / cfg.tau))),
    )
    states = _run_map(lambda u0: evolve(u0, params, run_cfg).final, list(ic_net), workers)
    bound = max(norm_V_p(u, params.p) for u in states)
    return AttractorSample(params, states, float(transient_time), bound)


def upper_semicontinuity_experiment(
    p_list, params_base: ProblemParams, ic_net, transient_time: float, cfg: SolverConfig, workers: int = 1
):
    """Rows ``(p, sup over sampled A_p states of the distance to A_2, AttractorSample)``.

    Below ``lambda_1`` the linear attractor is ``{u_2*}`` and the distance is
    the Hausdorff semi-distance to it; otherwise each state is measured
    against the span/equilibrium description.
    """
    basis = laplacian_eigs(params_base.mesh)
    lam = params_base.lam
    try:
        u2 = solve_equilibrium_2(params_base.with_p(2.0)).state
    except EquilibriumError:
        u2 = None
    rows = []
    for p in p_list:
        sample = sample_attractor_p(params_base.with_p(p), ic_net, transient_time, cfg, workers)
        if lam < basis.eigenvalues[0]:
            d = hausdorff_semidist(sample.states, [u2])
        else:
            d = max(dist_to_A2(u, basis, lam, u2) for u in sample.states)
        rows.append((float(p), d, sample))
    return rows


def save_attractor_sample(sample: AttractorSample, directory) -> None:
    """One GridFunction file per state plus ``manifest.json``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    files = []
    for i, u in enumerate(sample.states):
        name = f"state_{i:03d}.txt"
        save_grid_function(u, d / name)
        files.append(name)
    manifest = {
        "p": sample.params.p,
        "lambda": sample.params.lam,
        "L": sample.params.mesh.length,
        "n": sample.params.mesh.n,
        "transient_time": sample.transient_time,
        "v_norm_bound": sample.v_norm_bound,
        "states": files,
    }
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_attractor_sample(directory, g: GridFunction | None = None) -> AttractorSample:
    d = Path(directory)
    m = json.loads((d / "manifest.json").read_text())
    mesh = Mesh1D(m["L"], m["n"])
    params = ProblemParams(m["p"], m["lambda"], g if g is not None else mesh.zeros())
    states = [load_grid_function(d / f, mesh) for f in m["states"]]
    return AttractorSample(params, states, m["transient_time"], m["v_norm_bound"])
