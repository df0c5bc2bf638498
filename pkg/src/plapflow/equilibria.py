"""Stationary states of the flow and the ``p -> 2+`` equilibrium sweep."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cholesky_banded, cho_solve_banded, solve_banded

from .grid import GridFunction, gradient_values, norm_l2, norm_V_p
from .operators import ProblemParams, _ap_values, energy_tilde_Ep, jacobian_bands
from .spectral import laplacian_eigs

__all__ = [
    "EquilibriumResult",
    "EquilibriumError",
    "solve_equilibrium_2",
    "solve_equilibrium_p",
    "sweep_equilibrium_continuity",
]


class EquilibriumError(RuntimeError):
    pass


@dataclass(frozen=True)
class EquilibriumResult:
    state: GridFunction
    residual: float
    iterations: int
    energy: float


def solve_equilibrium_2(params: ProblemParams) -> EquilibriumResult:
    """Direct tridiagonal solve of ``(A_2 - lam) u = g``.

    Raises :class:`EquilibriumError` when ``lam`` sits on a discrete eigenvalue.
    """
    if params.p != 2.0:
        raise ValueError(f"linear equilibrium needs p = 2, got {params.p}")
    mesh = params.mesh
    eigs = laplacian_eigs(mesh).eigenvalues
    lam = params.lam
    if np.min(np.abs(eigs - lam)) <= 1e-10 * max(1.0, abs(lam)):
        raise EquilibriumError(f"lambda = {lam!r} is a discrete eigenvalue: A_2 - lambda is singular")
    h = mesh.h
    n = mesh.n
    ab = np.zeros((3, n))
    ab[0, 1:] = -1.0 / h**2
    ab[1, :] = 2.0 / h**2 - lam
    ab[2, :-1] = -1.0 / h**2
    u = GridFunction(mesh, solve_banded((1, 1), ab, params.g.values))
    res = _residual(u.values, params)
    return EquilibriumResult(u, norm_l2(GridFunction(mesh, res)), 1, energy_tilde_Ep(u, params))


def _residual(v: np.ndarray, params: ProblemParams) -> np.ndarray:
    h = params.mesh.h
    return _ap_values(v, h, params.p) - params.lam * v - params.g.values


def _energy(v: np.ndarray, params: ProblemParams) -> float:
    h = params.mesh.h
    du = np.abs(gradient_values(v, h))
    return h * (np.sum(du**params.p) / params.p - 0.5 * params.lam * np.dot(v, v) - np.dot(params.g.values, v))


def default_tol(v: np.ndarray, params: ProblemParams) -> float:
    """``1e-10`` relative to the size of the forcing side ``lam u + g``."""
    sqh = np.sqrt(params.mesh.h)
    return 1e-10 * (1.0 + sqh * (abs(params.lam) * np.linalg.norm(v) + np.linalg.norm(params.g.values)))


def _descend(v: np.ndarray, params: ProblemParams, tol, max_iters: int) -> tuple[np.ndarray, float, int]:
    """Shifted Newton with Armijo backtracking on the energy; gradient step as fallback."""
    h = params.mesh.h
    sqh = np.sqrt(h)
    lam, p = params.lam, params.p
    fixed_tol = tol
    r = _residual(v, params)
    res = sqh * np.linalg.norm(r)
    e = _energy(v, params)
    shift = 0.0
    for it in range(max_iters):
        tol = fixed_tol if fixed_tol is not None else default_tol(v, params)
        if res <= tol:
            return v, res, it
        if not np.isfinite(e):
            raise EquilibriumError("non-finite energy encountered")
        diag, off = jacobian_bands(v, h, p)
        diag = diag - lam
        scale = 1.0 + np.max(np.abs(diag))
        shift = shift / 10.0 if shift > 1e-14 * scale else 0.0
        while True:
            ab = np.zeros((2, len(v)))
            ab[0, 1:] = off
            ab[1, :] = diag + shift
            try:
                c = cholesky_banded(ab)
                break
            except LinAlgError:
                shift = max(10.0 * shift, 1e-10 * scale)
        dv = -cho_solve_banded((c, False), r)
        slope = h * np.dot(r, dv)
        if not slope < 0:
            dv = -r
            slope = -h * np.dot(r, r)
        # near convergence energy differences drop below rounding, so a full
        # step that clearly shrinks the residual is taken without line search
        cand = v + dv
        e_c = _energy(cand, params)
        r_c = _residual(cand, params)
        res_c = sqh * np.linalg.norm(r_c)
        if not (res_c < 0.5 * res and e_c <= e + 1e-12 * (1.0 + abs(e))):
            step = 1.0
            while step > 1e-14:
                cand = v + step * dv
                e_c = _energy(cand, params)
                if e_c <= e + 1e-4 * step * slope:
                    break
                step *= 0.5
            else:
                shift = max(10.0 * shift, 1e-6 * scale)
                continue
            r_c = _residual(cand, params)
            res_c = sqh * np.linalg.norm(r_c)
        v, r, res, e = cand, r_c, res_c, e_c
    if res <= (fixed_tol if fixed_tol is not None else default_tol(v, params)):
        return v, res, max_iters
    raise EquilibriumError(f"equilibrium solve stalled after {max_iters} iterations (residual {res:.3e})")


def solve_equilibrium_p(
    params: ProblemParams,
    initial_guess: GridFunction | None = None,
    tol: float | None = None,
    max_iters: int = 500,
    restarts: int = 5,
    seed: int = 0,
) -> EquilibriumResult:
    """Minimise the energy ``J_p(u) - lam/2 ||u||^2 - <g, u>`` for ``p > 2``.

    For ``lam <= 0`` the energy is strictly convex and one descent from
    ``initial_guess`` suffices.  For ``lam > 0`` it may have several critical
    points; ``restarts - 1`` extra seeded random starts are tried and the
    lowest-energy stationary point is returned.

    ``tol`` bounds the L2 norm of ``A_p u - lam u - g``; the default is
    ``1e-10 * (1 + ||lam u|| + ||g||)``.
    """
    if not params.p > 2.0:
        raise ValueError(f"nonlinear equilibrium needs p > 2, got {params.p}")
    mesh = params.mesh
    guess = initial_guess if initial_guess is not None else mesh.zeros()
    starts = [guess.values]
    if params.lam > 0 and restarts > 1:
        rng = np.random.default_rng(seed)
        scale = max(1.0, norm_l2(guess))
        for _ in range(restarts - 1):
            starts.append(scale * rng.standard_normal(mesh.n))
    best = None
    errors = []
    for v0 in starts:
        try:
            v, res, its = _descend(np.array(v0, dtype=float), params, tol, max_iters)
        except EquilibriumError as exc:
            errors.append(exc)
            continue
        e = _energy(v, params)
        if best is None or e < best[1]:
            best = (v, e, res, its)
    if best is None:
        raise errors[0]
    v, e, res, its = best
    return EquilibriumResult(GridFunction(mesh, v), res, its, e)


def sweep_equilibrium_continuity(p_list, params_base: ProblemParams, tol: float | None = None, **kwargs):
    """Track ``u_p*`` for ``p`` decreasing to 2 against the linear equilibrium.

    Returns rows ``(p, ||u_p* - u_2*||_{V,2}, ||u_p* - u_2*||_{V,p}, residual, iterations)``.
    Each solve is warm-started from the previous one (from ``u_2*`` for the first).
    """
    p_list = [float(p) for p in p_list]
    if any(p <= 2 for p in p_list) or any(b >= a for a, b in zip(p_list, p_list[1:])):
        raise ValueError("p_list must be strictly decreasing with all entries > 2")
    lam1 = laplacian_eigs(params_base.mesh).eigenvalues[0]
    if not params_base.lam < lam1:
        raise ValueError(f"sweep needs lambda < lambda_1 = {lam1:.6g}")
    u2 = solve_equilibrium_2(params_base.with_p(2.0)).state
    guess = u2
    rows = []
    for p in p_list:
        eq = solve_equilibrium_p(params_base.with_p(p), guess, tol, **kwargs)
        d = eq.state - u2
        rows.append((p, norm_V_p(d, 2.0), norm_V_p(d, p), eq.residual, eq.iterations))
        guess = eq.state
    return rows
