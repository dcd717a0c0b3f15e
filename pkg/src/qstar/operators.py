"""Operators between normed coordinate spaces and their norms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import QuasiPair
from .bilinear import DEFAULT_SEED, bilinear_max
from .norms import NormSpec

__all__ = ["OperatorMatrix", "OperatorNormResult", "operator_norm", "a0_norm",
           "left_mult", "right_mult"]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    matrix: np.ndarray
    domain: NormSpec
    codomain: NormSpec

    def __post_init__(self):
        T = np.asarray(self.matrix, dtype=complex)
        if T.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {T.shape} inconsistent with norms "
                f"({self.codomain.dim}, {self.domain.dim})")
        object.__setattr__(self, "matrix", T)

    def __matmul__(self, v):
        return self.matrix @ v


@dataclass
class OperatorNormResult:
    value: float
    lower: float
    upper: float
    exact: bool
    converged: bool
    method: str
    argmax: np.ndarray = None

    def __float__(self):
        return self.value


def _same_lp(X: NormSpec, Y: NormSpec) -> bool:
    if X.kind not in ("p", "weighted") or Y.kind not in ("p", "weighted"):
        return False
    px, sx = X.lp_scale()
    py, sy = Y.lp_scale()
    return px == py and np.allclose(sx, sy, rtol=1e-14, atol=0)


def _upper_estimate(T, X, Y):
    """A crude but valid upper bound: sum_j ||T e_j||_Y * ||e_j^*||_{X*}."""
    Xd = X.dual()
    tot = 0.0
    for j in range(T.shape[1]):
        ej = np.zeros(T.shape[1], dtype=complex)
        ej[j] = 1.0
        tot += Y.eval(T[:, j]) * Xd.eval(ej)
    return tot


def operator_norm(T: OperatorMatrix, restarts: int = 32, seed: int = DEFAULT_SEED) -> OperatorNormResult:
    """sup ||T v|| over the unit ball of the domain norm."""
    M = T.matrix
    X, Y = T.domain, T.codomain
    if not np.any(M):
        return OperatorNormResult(0.0, 0.0, 0.0, True, True, "zero")
    if M.shape[0] == M.shape[1] and np.count_nonzero(M - np.diag(np.diag(M))) == 0 and _same_lp(X, Y):
        d = np.abs(np.diag(M))
        k = int(np.argmax(d))
        v = np.zeros(M.shape[1], dtype=complex)
        v[k] = 1.0 / X.eval(np.eye(M.shape[1])[k])
        return OperatorNormResult(float(d[k]), float(d[k]), float(d[k]), True, True, "diagonal", v)
    res = bilinear_max(M, Y.dual(), X, restarts=restarts, seed=seed)
    if res.exact:
        return OperatorNormResult(res.value, res.value, res.value, True, True, res.method, res.w)
    try:
        up = max(_upper_estimate(M, X, Y), res.value)
    except NotImplementedError:
        up = np.inf
    return OperatorNormResult(res.value, res.value, up, False, res.converged, res.method, res.w)


def left_mult(pair: QuasiPair, x) -> OperatorMatrix:
    return OperatorMatrix(pair.algebra.left_matrix(x), pair.normA, pair.normA)


def right_mult(pair: QuasiPair, x) -> OperatorMatrix:
    return OperatorMatrix(pair.algebra.right_matrix(x), pair.normA, pair.normA)


def a0_norm(pair: QuasiPair, x, restarts: int = 32, seed: int = DEFAULT_SEED,
            detail: bool = False):
    """The multiplier norm max(||L_x||, ||R_x||)."""
    rl = operator_norm(left_mult(pair, x), restarts, seed)
    rr = operator_norm(right_mult(pair, x), restarts, seed)
    if detail:
        return rl if rl.value >= rr.value else rr
    return max(rl.value, rr.value)
