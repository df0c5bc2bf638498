"""Flat ``key = value`` experiment files.

Example::

    L = 3.141592653589793
    n = 63
    p_list = 2.5, 2.25, 2.125
    lambda = (lambda1 + lambda2) / 2
    g = mode:1
    u0 = random:7
    tau = 1e-3
    t_final = 1

``lambda`` may be an arithmetic expression in the discrete eigenvalues
``lambda1 .. lambdaN`` and ``pi``.  ``g`` and ``u0`` take ``zero``,
``mode:<j>``, ``file:<path>`` or ``random:<seed>``.
"""
from __future__ import annotations

import ast
import configparser
import operator
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .evolution import SolverConfig
from .grid import GridFunction, Mesh1D, load_grid_function
from .spectral import SpectralBasis

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config", "eval_lambda", "resolve_field"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    L: float = float(np.pi)
    n: int = 63
    p: float | None = None
    p_list: tuple | None = None
    lam: str = "0"
    g: str = "zero"
    u0: str = "zero"
    tau: float = 1e-3
    t_final: float = 1.0
    newton_tol: float | None = None
    max_newton_iters: int = 50
    record_every: int = 1
    transient_time: float = 30.0
    u0_p_offset: float = 0.0
    eq_tol: float | None = None
    count: int = 100_000
    ghidaglia_count: int = 100
    base_dir: str = "."

    def mesh(self) -> Mesh1D:
        return Mesh1D(self.L, self.n)

    def solver(self, t_final: float | None = None) -> SolverConfig:
        return SolverConfig(
            tau=self.tau,
            t_final=self.t_final if t_final is None else t_final,
            newton_tol=self.newton_tol,
            max_newton_iters=self.max_newton_iters,
            record_every=self.record_every,
        )

    def describe(self) -> list[str]:
        """``key=value`` lines of the fully resolved config, for CSV headers."""
        return [f"{k}={v!r}" for k, v in sorted(asdict(self).items()) if k != "base_dir"]


_FLOAT = {"L", "p", "tau", "t_final", "newton_tol", "transient_time", "u0_p_offset", "eq_tol"}
_INT = {"n", "max_newton_iters", "record_every", "count", "ghidaglia_count"}
_STR = {"g", "u0"}


def parse_config(text: str, base_dir=".") -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"),
                                   inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    kw = {}
    for key, raw in cp["experiment"].items():
        raw = raw.strip()
        try:
            if key in _FLOAT:
                kw[key] = float(raw)
            elif key in _INT:
                kw[key] = int(float(raw))
            elif key in _STR:
                kw[key] = raw
            elif key == "lambda":
                kw["lam"] = raw
            elif key == "p_list":
                kw["p_list"] = tuple(float(x) for x in raw.replace(",", " ").split())
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    cfg = ExperimentConfig(base_dir=str(base_dir), **kw)
    _validate(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(), base_dir=path.parent)


def _validate(cfg: ExperimentConfig) -> None:
    try:
        cfg.mesh()
        SolverConfig(cfg.tau, cfg.t_final, cfg.newton_tol, cfg.max_newton_iters, cfg.record_every)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.p is not None and cfg.p < 2:
        raise ConfigError(f"p must be >= 2, got {cfg.p}")
    if cfg.p_list is not None:
        pl = cfg.p_list
        if not pl or any(p <= 2 for p in pl) or any(b >= a for a, b in zip(pl, pl[1:])):
            raise ConfigError(f"p_list must be strictly decreasing toward 2 with entries > 2, got {pl}")
    for key in ("g", "u0"):
        spec = getattr(cfg, key)
        kind, _, arg = spec.partition(":")
        if kind not in ("zero", "mode", "file", "random"):
            raise ConfigError(f"{key}: unknown spec {spec!r}")
        if kind == "file" and not (Path(cfg.base_dir) / arg).is_file():
            raise ConfigError(f"{key}: file not found: {Path(cfg.base_dir) / arg}")
        if kind in ("mode", "random"):
            try:
                int(arg)
            except ValueError:
                raise ConfigError(f"{key}: expected an integer in {spec!r}") from None


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def eval_lambda(expr: str, basis: SpectralBasis) -> float:
    """Evaluate an arithmetic expression over numbers, ``pi`` and ``lambda<j>``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Name):
            if node.id == "pi":
                return float(np.pi)
            if node.id.startswith("lambda") and node.id[6:].isdigit():
                j = int(node.id[6:])
                try:
                    return basis.eigenvalue(j)
                except IndexError as exc:
                    raise ConfigError(str(exc)) from None
        raise ConfigError(f"unsupported term in lambda expression: {ast.dump(node)}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse lambda expression {expr!r}") from exc
    return float(ev(tree))


def resolve_field(spec: str, mesh: Mesh1D, basis: SpectralBasis, base_dir=".") -> GridFunction:
    kind, _, arg = spec.partition(":")
    if kind == "zero":
        return mesh.zeros()
    if kind == "mode":
        try:
            return basis.phi(int(arg))
        except IndexError as exc:
            raise ConfigError(str(exc)) from None
    if kind == "random":
        return mesh.random(np.random.default_rng(int(arg)))
    if kind == "file":
        path = Path(base_dir) / arg
        if not path.is_file():
            raise ConfigError(f"file not found: {path}")
        try:
            return load_grid_function(path, mesh)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"unknown field spec {spec!r}")
