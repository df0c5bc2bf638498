"""Reference inequalities and envelopes, as standalone checkable functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "TartarSample",
    "GhidagliaParams",
    "tartar_gap",
    "ghidaglia_envelope",
    "ghidaglia_worst_case",
    "exp_decay_envelope",
    "growth_lower_bound",
    "tartar_fuzz",
    "ghidaglia_fuzz",
]


@dataclass(frozen=True)
class TartarSample:
    xi: np.ndarray
    eta: np.ndarray
    p: float

    def __post_init__(self):
        xi = np.atleast_1d(np.asarray(self.xi, dtype=float))
        eta = np.atleast_1d(np.asarray(self.eta, dtype=float))
        if xi.shape != eta.shape or xi.ndim != 1 or len(xi) < 1:
            raise ValueError("xi and eta must be vectors of the same length >= 1")
        if not self.p >= 2:
            raise ValueError("p must be >= 2")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)


@dataclass(frozen=True)
class GhidagliaParams:
    gamma: float
    delta: float
    p: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.delta >= 0 and self.p > 2):
            raise ValueError("need gamma > 0, delta >= 0, p > 2")


def _vflux(x: np.ndarray, p: float) -> np.ndarray:
    nx = np.linalg.norm(x)
    return x * nx ** (p - 2) if nx > 0 else np.zeros_like(x)


def tartar_gap(sample: TartarSample, constant_exponent: float = 2.0) -> tuple[float, float]:
    """``(lhs, rhs)`` with ``lhs = 2^(2-p)|xi-eta|^p`` and ``rhs`` the flux pairing.

    ``constant_exponent`` replaces the 2 in ``2^(2-p)``; it exists only to
    mutation-test the fuzz harness.
    """
    xi, eta, p = sample.xi, sample.eta, sample.p
    d = xi - eta
    lhs = 2.0 ** (constant_exponent - p) * np.linalg.norm(d) ** p
    rhs = float(np.dot(_vflux(xi, p) - _vflux(eta, p), d))
    return float(lhs), rhs


def ghidaglia_envelope(t: float, params: GhidagliaParams) -> float:
    """``(delta/gamma)^(2/p) + (gamma (p-2) t / 2)^(-2/(p-2))``."""
    if not t > 0:
        raise ValueError("t must be positive")
    g, d, p = params.gamma, params.delta, params.p
    return (d / g) ** (2.0 / p) + (g * (p - 2.0) * t / 2.0) ** (-2.0 / (p - 2.0))


def ghidaglia_worst_case(times, params: GhidagliaParams, y0: float = np.inf):
    """Integrate ``y' = -gamma y^(p/2) + delta`` from ``y(0) = y0`` (default: infinity).

    Works in ``w = y^(-k)``, ``k = (p-2)/2``, where the equation becomes the
    non-stiff ``w' = k gamma - k delta w^(1 + 1/k)`` and ``y0 = inf`` is ``w = 0``.
    """
    g, d, p = params.gamma, params.delta, params.p
    k = (p - 2.0) / 2.0
    w0 = 0.0 if np.isinf(y0) else y0 ** (-k)

    def f(t, w):
        return k * g - k * d * np.maximum(w, 0.0) ** (1.0 + 1.0 / k)

    times = np.asarray(times, dtype=float)
    sol = solve_ivp(f, (0.0, float(times.max())), [w0], method="DOP853", t_eval=times, rtol=1e-13, atol=1e-20)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y[0] ** (-1.0 / k)


def exp_decay_envelope(t: float, rate: float, initial_gap: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return float(initial_gap * np.exp(rate * t))


def growth_lower_bound(t: float, u0_hat: float, g_hat: float, lam: float, lam_j: float) -> float:
    """Square of the single-mode coefficient; Parseval makes it a lower bound on ``||u(t)||^2``."""
    from .spectral import fourier_mode

    return fourier_mode(t, u0_hat, g_hat, lam, lam_j) ** 2


def tartar_fuzz(count: int = 100_000, seed: int = 0, constant_exponent: float = 2.0):
    """Check the Tartar pairing on seeded random samples.

    Returns ``(violations, min_gap)`` where ``violations`` lists the failing
    samples and ``min_gap`` is the smallest observed ``rhs - lhs``.
    """
    rng = np.random.default_rng(seed)
    violations = []
    min_gap = np.inf
    for _ in range(count):
        dim = int(rng.integers(1, 4))
        s = TartarSample(rng.uniform(-10, 10, dim), rng.uniform(-10, 10, dim), rng.uniform(2, 8))
        lhs, rhs = tartar_gap(s, constant_exponent)
        gap = rhs - lhs
        min_gap = min(min_gap, gap)
        if gap < -1e-12 * max(1.0, abs(rhs)):
            violations.append((s, lhs, rhs))
    return violations, float(min_gap)


def ghidaglia_fuzz(count: int = 100, seed: int = 0, rtol: float = 1e-9):
    """Integrated worst-case ODE against the envelope on ``count`` random triples."""
    rng = np.random.default_rng(seed)
    times = np.geomspace(0.01, 10.0, 25)
    violations = []
    worst = -np.inf
    for _ in range(count):
        prm = GhidagliaParams(rng.uniform(0.1, 5.0), rng.uniform(0.0, 5.0), rng.uniform(2.2, 6.0))
        y = ghidaglia_worst_case(times, prm)
        env = np.array([ghidaglia_envelope(t, prm) for t in times])
        excess = float(np.max((y - env) / env))
        worst = max(worst, excess)
        if excess > rtol:
            violations.append((prm, excess))
    return violations, worst
