"""Backward-Euler integration of ``du/dt + A_p u = lam u + g``.

Each step minimises the strictly convex functional

    Phi(v) = 1/2 ||v - u||^2 + tau * (J_p(v) - lam/2 ||v||^2 - <g, v>)

(convex as long as ``tau * max(lam, 0) < 1``) by damped Newton iteration on
its gradient, with a backtracking line search on ``Phi`` itself.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded

from .grid import GridFunction, Mesh1D, gradient_values, norm_V_p
from .operators import ProblemParams, _ap_values, jacobian_bands

__all__ = [
    "SolverConfig",
    "Trajectory",
    "NewtonFailure",
    "ConvexityError",
    "step_backward_euler",
    "evolve",
    "v_norm_diagnostic",
    "write_trajectory_csv",
    "read_trajectory_csv",
]

LINEAR_P_GAP = 1e-8


class NewtonFailure(RuntimeError):
    def __init__(self, message: str, residual: float, t: float | None = None):
        super().__init__(message)
        self.residual = residual
        self.t = t


class ConvexityError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    tau: float = 1e-3
    t_final: float = 1.0
    newton_tol: float | None = None  # None: 1e-10 * (1 + ||u||) per step
    max_newton_iters: int = 50
    record_every: int = 1

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.t_final >= 0:
            raise ValueError("t_final must be nonnegative")
        if self.max_newton_iters < 1 or self.record_every < 1:
            raise ValueError("max_newton_iters and record_every must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.tau))

    def check(self, params: ProblemParams) -> None:
        if self.tau * max(params.lam, 0.0) >= 1.0:
            raise ConvexityError(
                f"tau*lambda = {self.tau * params.lam:g} >= 1: implicit step is not strictly convex"
            )


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-stamped states of one run; times strictly increasing."""

    params: ProblemParams
    samples: list = field(repr=False)

    def __post_init__(self):
        ts = [t for t, _ in self.samples]
        if not ts:
            raise ValueError("empty trajectory")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("trajectory times must be strictly increasing")
        for _, u in self.samples:
            if u.mesh != self.params.mesh:
                raise ValueError("trajectory state on a foreign mesh")

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def states(self) -> list[GridFunction]:
        return [u for _, u in self.samples]

    @property
    def final(self) -> GridFunction:
        return self.samples[-1][1]

    def array(self) -> np.ndarray:
        return np.array([u.values for _, u in self.samples])


def _phi(v, u, params: ProblemParams, tau: float, h: float) -> float:
    p = params.p
    du = np.abs(gradient_values(v, h))
    jp = h * np.sum(du**p) / p
    return 0.5 * h * np.sum((v - u) ** 2) + tau * (jp - 0.5 * params.lam * h * np.sum(v * v) - h * np.dot(params.g.values, v))


def _linear_step(u: np.ndarray, params: ProblemParams, tau: float, h: float) -> np.ndarray:
    n = len(u)
    ab = np.zeros((3, n))
    ab[0, 1:] = -tau / h**2
    ab[1, :] = 1.0 + tau * (2.0 / h**2 - params.lam)
    ab[2, :-1] = -tau / h**2
    return solve_banded((1, 1), ab, u + tau * params.g.values)


def _step_values(u: np.ndarray, params: ProblemParams, cfg: SolverConfig, h: float) -> np.ndarray:
    p, lam, tau = params.p, params.lam, cfg.tau
    if p - 2.0 < LINEAR_P_GAP:
        return _linear_step(u, params.with_p(2.0), tau, h)
    tol = cfg.newton_tol if cfg.newton_tol is not None else 1e-10 * (1.0 + np.sqrt(h) * np.linalg.norm(u))
    g = params.g.values
    sqh = np.sqrt(h)

    def residual(v):
        return v + tau * (_ap_values(v, h, p) - lam * v - g) - u

    v = u.copy()
    r = residual(v)
    res = sqh * np.linalg.norm(r)
    for _ in range(cfg.max_newton_iters):
        if res <= tol:
            return v
        diag, off = jacobian_bands(v, h, p)
        ab = np.zeros((3, len(v)))
        ab[0, 1:] = tau * off
        ab[1, :] = 1.0 + tau * (diag - lam)
        ab[2, :-1] = tau * off
        dv = solve_banded((1, 1), ab, -r)
        cand = v + dv
        r_c = residual(cand)
        res_c = sqh * np.linalg.norm(r_c)
        if not res_c < 0.5 * res:
            # Newton step not contracting: backtrack on Phi
            phi0 = _phi(v, u, params, tau, h)
            # r is the (1/h-scaled) gradient of Phi; h*r.dv is the directional derivative
            slope = h * np.dot(r, dv)
            step = 1.0
            while step > 1e-12:
                c = v + step * dv
                if _phi(c, u, params, tau, h) <= phi0 + 1e-4 * step * slope:
                    cand = c
                    r_c = residual(cand)
                    res_c = sqh * np.linalg.norm(r_c)
                    break
                step *= 0.5
            # if no step lowers Phi (rounding floor) the full step is kept
        v, r, res = cand, r_c, res_c
    if res <= tol:
        return v
    raise NewtonFailure(f"Newton did not converge in {cfg.max_newton_iters} iterations (residual {res:.3e})", res)


def step_backward_euler(u: GridFunction, params: ProblemParams, cfg: SolverConfig) -> GridFunction:
    """One implicit Euler step from ``u`` over ``cfg.tau``."""
    cfg.check(params)
    return GridFunction(u.mesh, _step_values(u.values, params, cfg, u.mesh.h))


def evolve(u0: GridFunction, params: ProblemParams, cfg: SolverConfig) -> Trajectory:
    """March from ``u0`` to ``cfg.t_final``.

    Records ``(0, u0)``, every ``record_every``-th step, and the last step.
    Times are ``k * tau``.
    """
    cfg.check(params)
    h = u0.mesh.h
    v = u0.values
    samples = [(0.0, u0)]
    n_steps = cfg.n_steps
    for k in range(1, n_steps + 1):
        try:
            v = _step_values(v, params, cfg, h)
        except NewtonFailure as exc:
            t = k * cfg.tau
            raise NewtonFailure(f"step ending at t={t:g}: {exc}", exc.residual, t) from exc
        if k % cfg.record_every == 0 or k == n_steps:
            samples.append((k * cfg.tau, GridFunction(u0.mesh, v)))
    return Trajectory(params, samples)


def v_norm_diagnostic(traj: Trajectory) -> list[tuple[float, float]]:
    p = traj.params.p
    return [(t, norm_V_p(u, p)) for t, u in traj.samples]


def write_trajectory_csv(traj: Trajectory, path=None, tau: float | None = None, comments=()) -> str:
    """CSV with columns ``t, node_1..node_n``.

    A ``# key=value`` header line records p, lambda, L, n, tau; extra
    ``comments`` lines go above it.  Returns the text, writing it to ``path``
    when given.
    """
    mesh = traj.params.mesh
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(
        f"# p={traj.params.p!r} lambda={traj.params.lam!r} L={mesh.length!r} n={mesh.n} tau={tau!r}\n"
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"node_{i}" for i in range(1, mesh.n + 1)])
    for t, u in traj.samples:
        w.writerow([repr(float(t))] + [repr(float(x)) for x in u.values])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_trajectory_csv(path, g: GridFunction | None = None) -> Trajectory:
    """Inverse of :func:`write_trajectory_csv`; forcing defaults to zero (it is not stored)."""
    lines = Path(path).read_text().splitlines()
    meta = {}
    for line in lines:
        if line.startswith("# p="):
            meta = dict(tok.split("=", 1) for tok in line[1:].split())
    if not meta:
        raise ValueError(f"{path}: missing '# p=... lambda=... L=... n=... tau=...' header")
    mesh = Mesh1D(float(meta["L"]), int(meta["n"]))
    params = ProblemParams(float(meta["p"]), float(meta["lambda"]), g if g is not None else mesh.zeros())
    rows = list(csv.reader(line for line in lines if not line.startswith("#")))
    samples = [(float(r[0]), GridFunction(mesh, [float(x) for x in r[1:]])) for r in rows[1:]]
    return Trajectory(params, samples)
