"""Dirichlet-Laplacian eigenpairs on the mesh and the exact linear flow.

For ``p = 2`` the semi-discrete problem is linear and diagonal in the sine
basis, so each Fourier coefficient evolves by the variation-of-constants
formula and the solution is resynthesised exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, Mesh1D, MeshMismatchError, norm_l2
from .operators import ProblemParams

__all__ = [
    "SpectralBasis",
    "SpectralCoeffs",
    "laplacian_eigs",
    "count_N_lambda",
    "fourier_mode",
    "is_resonant",
    "solve_p2_exact",
    "parseval_mode_bound",
]

RESONANCE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    mesh: Mesh1D
    eigenvalues: np.ndarray
    # row j-1 holds phi_j at the interior nodes
    vectors: np.ndarray

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def eigenvalue(self, j: int) -> float:
        """1-based eigenvalue ``lambda_j``."""
        self._check_index(j)
        return float(self.eigenvalues[j - 1])

    def phi(self, j: int) -> GridFunction:
        """1-based eigenvector ``phi_j``."""
        self._check_index(j)
        return GridFunction(self.mesh, self.vectors[j - 1])

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.size:
            raise IndexError(f"mode index {j} outside 1..{self.size}")

    def analyze(self, u: GridFunction) -> "SpectralCoeffs":
        if u.mesh != self.mesh:
            raise MeshMismatchError(f"{u.mesh} vs {self.mesh}")
        return SpectralCoeffs(self, self.mesh.h * (self.vectors @ u.values))

    def synthesize(self, coeffs) -> GridFunction:
        return GridFunction(self.mesh, np.asarray(coeffs, dtype=float) @ self.vectors)

    def project_out(self, u: GridFunction, modes) -> GridFunction:
        """``u`` with the listed (1-based) mode coefficients removed."""
        c = self.analyze(u).coeffs.copy()
        for j in modes:
            self._check_index(j)
            c[j - 1] = 0.0
        return self.synthesize(c)


@dataclass(frozen=True, eq=False)
class SpectralCoeffs:
    basis: SpectralBasis
    coeffs: np.ndarray

    def __getitem__(self, j: int) -> float:
        """1-based coefficient ``<u, phi_j>``."""
        self.basis._check_index(j)
        return float(self.coeffs[j - 1])


def laplacian_eigs(mesh: Mesh1D) -> SpectralBasis:
    """All ``n`` eigenpairs of the three-point Dirichlet Laplacian, closed form."""
    n, h, L = mesh.n, mesh.h, mesh.length
    j = np.arange(1, n + 1)
    eigenvalues = (4.0 / h**2) * np.sin(j * np.pi * h / (2.0 * L)) ** 2
    # h * sum_i sin^2(j pi i/(n+1)) = L/2 exactly, hence the sqrt(2/L) factor
    vectors = np.sqrt(2.0 / L) * np.sin(np.outer(j, mesh.nodes) * np.pi / L)
    eigenvalues.flags.writeable = False
    vectors.flags.writeable = False
    return SpectralBasis(mesh, eigenvalues, vectors)


def count_N_lambda(lam: float, basis: SpectralBasis) -> int:
    """Number of eigenvalues ``<= lam``."""
    return int(np.searchsorted(basis.eigenvalues, lam, side="right"))


def is_resonant(lam: float, lam_j: float) -> bool:
    return abs(lam - lam_j) < RESONANCE_RTOL * max(1.0, abs(lam))


def fourier_mode(t: float, u0_hat: float, g_hat: float, lam: float, lam_j: float) -> float:
    """Coefficient of mode j at time t under ``du/dt = (lam - lam_j) u + g_hat``."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if is_resonant(lam, lam_j):
        return u0_hat + t * g_hat
    mu = lam - lam_j
    return float(np.exp(mu * t) * u0_hat + np.expm1(mu * t) / mu * g_hat)


def _modes_at(t: float, u0_hat: np.ndarray, g_hat: np.ndarray, lam: float, eigs: np.ndarray) -> np.ndarray:
    return np.array([fourier_mode(t, a, b, lam, lj) for a, b, lj in zip(u0_hat, g_hat, eigs)])


def solve_p2_exact(u0: GridFunction, params: ProblemParams, times, basis: SpectralBasis | None = None):
    """Exact solution of the semi-discrete linear problem at the requested times."""
    from .evolution import Trajectory

    if params.p != 2.0:
        raise ValueError(f"exact spectral solver needs p = 2, got {params.p}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be a nonempty, strictly increasing sequence starting at t >= 0")
    basis = basis or laplacian_eigs(params.mesh)
    a = basis.analyze(u0).coeffs
    b = basis.analyze(params.g).coeffs
    samples = [(float(t), basis.synthesize(_modes_at(t, a, b, params.lam, basis.eigenvalues))) for t in times]
    return Trajectory(params, samples)


def parseval_mode_bound(traj, j: int, basis: SpectralBasis) -> list[tuple[float, float, float]]:
    """Per sample: ``(t, |u_j(t)|, ||u(t)||)``; Parseval forces the second <= the third."""
    basis._check_index(j)
    out = []
    for t, u in traj.samples:
        out.append((t, abs(basis.analyze(u)[j]), norm_l2(u)))
    return out
