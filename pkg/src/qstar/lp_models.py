"""Discretized L^p quasi *-algebras on uniform grids of [0, 1].

The pair on n cells is the pointwise algebra with the weighted p-norm
(sum |v_i|^p / n)^(1/p); the multiplier norm is the sup norm.  Refinement
families link grids by cell replication and emulate density and completion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from .algebra import QuasiPair, pointwise_algebra
from .bilinear import DEFAULT_SEED
from .crossnorms import TensorElement, hilbert_norm, projective_norm
from .norms import NormSpec, lp, weighted

__all__ = [
    "GridLpPair",
    "make_lp_pair",
    "grid_norm",
    "product_grid_identify",
    "verify_l1_gamma_identity",
    "verify_l2_h_identity",
    "IdentityReport",
    "RefinementFamily",
    "refinement_family",
    "step_approximation_error",
]


def grid_norm(n: int, p: float) -> NormSpec:
    """L^p norm of step functions on n equal cells (probability measure)."""
    if not (p >= 1):
        raise ValueError("p must be at least 1")
    if np.isinf(p):
        return lp(np.inf, n)
    return weighted(p, np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class GridLpPair:
    n: int
    p: float
    pair: QuasiPair
    a0_norm_model: str = "sup"

    def a0_norm(self, x) -> float:
        """Multiplier norm of x: the sup norm, exact for diagonal actions."""
        return float(np.abs(np.asarray(x, dtype=complex)).max()) if self.n else 0.0

    def to_json(self):
        return self.pair.to_json()


def make_lp_pair(n: int, p: float, label: str = "") -> GridLpPair:
    if n < 1:
        raise ValueError("grid size must be positive")
    if not (p >= 1):
        raise ValueError("p must be at least 1")
    pstr = "inf" if np.isinf(p) else f"{p:g}"
    pair = QuasiPair.make(pointwise_algebra(n), grid_norm(n, p), label or f"lp-grid-n{n}-p{pstr}",
                          {"model": "lp-grid", "n": n, "p": p})
    return GridLpPair(n, float(p), pair)


def product_grid_identify(f, g) -> np.ndarray:
    """h(s, t) = f(s) g(t) in row-major order."""
    return np.kron(np.asarray(f, dtype=complex), np.asarray(g, dtype=complex))


@dataclass
class IdentityReport:
    n: int
    m: int
    trials: int
    max_deviation: float
    tol: float
    deviations: List[float] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tol)


def _random_tensor(rng, n, m):
    kind = rng.integers(3)
    if kind == 0:  # elementary
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        g = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        return np.outer(f, g)
    if kind == 1:  # real with mixed signs
        return rng.standard_normal((n, m))
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def verify_l1_gamma_identity(n: int, m: int, trials: int = 100, tol: float = 1e-9,
                             seed: int = DEFAULT_SEED) -> IdentityReport:
    """gamma on L1(n) (x) L1(m) against the flattened L1(n*m) norm."""
    rng = np.random.default_rng(seed)
    X, Y = grid_norm(n, 1), grid_norm(m, 1)
    flat = grid_norm(n * m, 1)
    devs = []
    for _ in range(trials):
        M = _random_tensor(rng, n, m)
        g = projective_norm(TensorElement(M, X, Y)).value
        devs.append(abs(g - flat.eval(M.reshape(-1))))
    return IdentityReport(n, m, trials, float(max(devs)), tol, devs)


def verify_l2_h_identity(n: int, m: int, trials: int = 100, tol: float = 1e-9,
                         seed: int = DEFAULT_SEED) -> IdentityReport:
    """h on L2(n) (x) L2(m) against the flattened L2(n*m) norm."""
    rng = np.random.default_rng(seed)
    X, Y = grid_norm(n, 2), grid_norm(m, 2)
    flat = grid_norm(n * m, 2)
    devs = []
    for _ in range(trials):
        M = _random_tensor(rng, n, m)
        devs.append(abs(hilbert_norm(TensorElement(M, X, Y)) - flat.eval(M.reshape(-1))))
    return IdentityReport(n, m, trials, float(max(devs)), tol, devs)


@dataclass(frozen=True, eq=False)
class RefinementFamily:
    p: float
    levels: tuple
    pairs: tuple

    def prolong(self, k: int, x) -> np.ndarray:
        """Map a step function on level k to level k+1 by cell replication."""
        r = self.levels[k + 1] // self.levels[k]
        return np.repeat(np.asarray(x, dtype=complex), r)

    def prolong_to(self, k: int, j: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        for i in range(k, j):
            x = self.prolong(i, x)
        return x

    def sample(self, f: Callable, k: int) -> np.ndarray:
        """Cell-midpoint samples of f at level k."""
        n = self.levels[k]
        return np.asarray(f((np.arange(n) + 0.5) / n), dtype=complex)


def refinement_family(p: float, levels: Sequence[int]) -> RefinementFamily:
    levels = tuple(int(n) for n in levels)
    if not levels:
        raise ValueError("at least one level is needed")
    for a, b in zip(levels, levels[1:]):
        if b <= a or b % a:
            raise ValueError("levels must be strictly increasing and nested")
    return RefinementFamily(float(p), levels, tuple(make_lp_pair(n, p) for n in levels))


def step_approximation_error(f: Callable, n: int, p: float, sub: int = 64) -> float:
    """L^p([0,1]) distance between f and its midpoint step approximation on n cells."""
    t = (np.arange(n * sub) + 0.5) / (n * sub)
    mid = (np.arange(n) + 0.5) / n
    step = np.repeat(np.asarray(f(mid), dtype=complex), sub)
    d = np.abs(np.asarray(f(t), dtype=complex) - step)
    if np.isinf(p):
        return float(d.max())
    return float(np.mean(d ** p) ** (1.0 / p))
