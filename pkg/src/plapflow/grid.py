"""Uniform 1-D mesh on (0, L) with homogeneous Dirichlet closure.

Grid functions store values at the ``n`` interior nodes ``x_i = i*h``,
``i = 1..n``; the boundary values are always zero and never stored.
Face functions hold one value per inter-node interval (``n + 1`` of them,
the two boundary intervals included).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Mesh1D",
    "GridFunction",
    "FaceFunction",
    "MeshMismatchError",
    "inner_l2",
    "norm_l2",
    "discrete_gradient",
    "norm_V_p",
    "save_grid_function",
    "load_grid_function",
]


class MeshMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Mesh1D:
    length: float
    n: int

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"mesh length must be positive, got {self.length}")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"need at least 3 interior nodes, got {self.n}")
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return self.length / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Interior node coordinates."""
        return self.h * np.arange(1, self.n + 1)

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros(self.n))

    def from_callable(self, f) -> "GridFunction":
        return GridFunction(self, f(self.nodes))

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> "GridFunction":
        return GridFunction(self, scale * rng.standard_normal(self.n))


def _frozen(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"{what} needs {size} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} values must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values at the interior nodes of ``mesh``.

    Supports the vector-space operations (``+``, ``-``, scalar ``*`` and
    ``/``, unary ``-``) between functions on the same mesh.
    """

    mesh: Mesh1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, self.mesh.n, "GridFunction"))

    def _check(self, other: "GridFunction") -> None:
        if not isinstance(other, GridFunction):
            raise TypeError(f"expected GridFunction, got {type(other).__name__}")
        if other.mesh != self.mesh:
            raise MeshMismatchError(f"{self.mesh} vs {other.mesh}")

    def __add__(self, other):
        self._check(other)
        return GridFunction(self.mesh, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return GridFunction(self.mesh, self.values - other.values)

    def __mul__(self, c):
        return GridFunction(self.mesh, float(c) * self.values)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridFunction(self.mesh, self.values / float(c))

    def __neg__(self):
        return GridFunction(self.mesh, -self.values)

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.mesh == other.mesh and np.array_equal(self.values, other.values)

    __hash__ = None

    def __len__(self):
        return self.mesh.n

    def padded(self) -> np.ndarray:
        """Values with the two zero boundary entries attached."""
        return np.concatenate(([0.0], self.values, [0.0]))


@dataclass(frozen=True, eq=False)
class FaceFunction:
    mesh: Mesh1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, self.mesh.n + 1, "FaceFunction"))


def _same_mesh(u: GridFunction, v: GridFunction) -> None:
    if u.mesh != v.mesh:
        raise MeshMismatchError(f"{u.mesh} vs {v.mesh}")


def inner_l2(u: GridFunction, v: GridFunction) -> float:
    """Discrete L2 inner product ``h * sum(u_i v_i)``."""
    _same_mesh(u, v)
    return float(u.mesh.h * np.dot(u.values, v.values))


def norm_l2(u: GridFunction) -> float:
    scale = np.max(np.abs(u.values))
    if scale == 0.0:
        return 0.0
    return float(scale * np.sqrt(u.mesh.h) * np.linalg.norm(u.values / scale))


def gradient_values(values: np.ndarray, h: float) -> np.ndarray:
    """Face differences of interior-node values with zero Dirichlet closure."""
    return np.diff(values, prepend=0.0, append=0.0) / h


def discrete_gradient(u: GridFunction) -> FaceFunction:
    return FaceFunction(u.mesh, gradient_values(u.values, u.mesh.h))


def _check_p(p: float) -> None:
    if not p >= 2:
        raise ValueError(f"exponent p must be >= 2, got {p}")


def norm_V_p(u: GridFunction, p: float) -> float:
    """``(h * sum_k |Du_k|^p)^(1/p)`` over all n+1 faces."""
    _check_p(p)
    du = np.abs(gradient_values(u.values, u.mesh.h))
    scale = du.max()
    if scale == 0.0:
        return 0.0
    # factor out the max to keep |Du|^p from overflowing for large p
    return float(scale * (u.mesh.h * np.sum((du / scale) ** p)) ** (1.0 / p))


def save_grid_function(u: GridFunction, path) -> None:
    lines = [f"# n={u.mesh.n} L={u.mesh.length!r}"]
    lines += [repr(float(x)) for x in u.values]
    Path(path).write_text("\n".join(lines) + "\n")


def load_grid_function(path, mesh: Mesh1D | None = None) -> GridFunction:
    """Read the plain-text format written by :func:`save_grid_function`.

    The header fixes the mesh; if ``mesh`` is given it must agree.
    """
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("#"):
        raise ValueError(f"{path}: missing '# n=<n> L=<L>' header")
    header = dict(tok.split("=", 1) for tok in text[0][1:].split())
    file_mesh = Mesh1D(float(header["L"]), int(header["n"]))
    if mesh is not None and mesh != file_mesh:
        raise MeshMismatchError(f"{path}: file mesh {file_mesh} differs from {mesh}")
    values = [float(line) for line in text[1:] if line.strip()]
    return GridFunction(file_mesh, values)
