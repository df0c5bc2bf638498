"""Discrete p-Laplacian, its energies, and the affine forcing term."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, Mesh1D, MeshMismatchError, _check_p, gradient_values, inner_l2, norm_l2, norm_V_p

__all__ = [
    "ProblemParams",
    "apply_Ap",
    "energy_Jp",
    "energy_tilde_Ep",
    "grad_tilde_Ep",
    "rhs_B",
    "flux",
    "jacobian_bands",
]


@dataclass(frozen=True)
class ProblemParams:
    """Exponent ``p``, linear coefficient ``lam`` and forcing ``g``."""

    p: float
    lam: float
    g: GridFunction

    def __post_init__(self):
        _check_p(self.p)
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def mesh(self) -> Mesh1D:
        return self.g.mesh

    def with_p(self, p: float) -> "ProblemParams":
        return ProblemParams(p, self.lam, self.g)


def flux(du: np.ndarray, p: float) -> np.ndarray:
    """``|du|^(p-2) du``, taken as 0 where ``du == 0``."""
    if p == 2.0:
        return du.copy()
    a = np.abs(du)
    out = np.zeros_like(du)
    nz = a > 0
    out[nz] = a[nz] ** (p - 2.0) * du[nz]
    return out


def _ap_values(values: np.ndarray, h: float, p: float) -> np.ndarray:
    w = flux(gradient_values(values, h), p)
    return -(w[1:] - w[:-1]) / h


def apply_Ap(u: GridFunction, p: float) -> GridFunction:
    """Node ``i`` gets ``-(w_{i+1/2} - w_{i-1/2})/h`` with ``w = |Du|^(p-2) Du``."""
    _check_p(p)
    return GridFunction(u.mesh, _ap_values(u.values, u.mesh.h, p))


def jacobian_bands(values: np.ndarray, h: float, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the (symmetric) derivative of ``A_p`` at ``values``.

    Face weights are ``(p-1)|Du|^(p-2)``; the off-diagonal has length n-1.
    """
    du = gradient_values(values, h)
    if p == 2.0:
        a = np.ones_like(du)
    else:
        a = np.zeros_like(du)
        nz = du != 0
        a[nz] = (p - 1.0) * np.abs(du[nz]) ** (p - 2.0)
    diag = (a[:-1] + a[1:]) / h**2
    off = -a[1:-1] / h**2
    return diag, off


def energy_Jp(u: GridFunction, p: float) -> float:
    return norm_V_p(u, p) ** p / p


def energy_tilde_Ep(u: GridFunction, params: ProblemParams) -> float:
    _check_mesh(u, params)
    return energy_Jp(u, params.p) - 0.5 * params.lam * norm_l2(u) ** 2 - inner_l2(params.g, u)


def grad_tilde_Ep(u: GridFunction, params: ProblemParams) -> GridFunction:
    """L2-gradient of the energy: ``A_p u - lam u - g``."""
    _check_mesh(u, params)
    vals = _ap_values(u.values, u.mesh.h, params.p) - params.lam * u.values - params.g.values
    return GridFunction(u.mesh, vals)


def rhs_B(u: GridFunction, params: ProblemParams) -> GridFunction:
    _check_mesh(u, params)
    return params.lam * u + params.g


def _check_mesh(u: GridFunction, params: ProblemParams) -> None:
    if u.mesh != params.mesh:
        raise MeshMismatchError(f"{u.mesh} vs {params.mesh}")
