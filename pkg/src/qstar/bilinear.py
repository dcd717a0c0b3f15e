"""Maximization of |u^T M w| over products of norm balls.

This one primitive gives operator norms (codomain dual ball times domain
ball), the injective cross-norm (both dual balls) and the pricing step of the
projective cross-norm (both primal balls).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .norms import NormSpec

DEFAULT_SEED = 0x5EED

__all__ = ["BilinearResult", "bilinear_max", "DEFAULT_SEED"]


@dataclass
class BilinearResult:
    value: float
    u: np.ndarray
    w: np.ndarray
    exact: bool
    restarts: int = 0
    agree: int = 0
    method: str = ""
    candidates: List[tuple] = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.exact or self.agree >= 2


def _exact_l1_left(M, P, Q):
    X = P.extreme_points()
    best = (-1.0, None, None)
    for k in range(X.shape[1]):
        w, val = Q.maximizer(M.T @ X[:, k])
        if val > best[0]:
            best = (val, X[:, k].copy(), w)
    return best


def _exact_inner(M, P, Q):
    RP, RQ = P.chol_factor(), Q.chol_factor()
    K = np.linalg.solve(RP.T, M)
    K = np.linalg.solve(RQ.T, K.T).T
    U, s, Vh = np.linalg.svd(K)
    u = np.linalg.solve(RP, np.conj(U[:, 0]))
    w = np.linalg.solve(RQ, Vh[0].conj())
    return float(s[0]), u, w


def _exact(M, P, Q):
    """Exact value when the structure permits, else None."""
    n, m = M.shape
    if P.is_l1_type:
        val, u, w = _exact_l1_left(M, P, Q)
        return val, u, w, "l1-enumeration"
    if Q.is_l1_type:
        val, w, u = _exact_l1_left(M.T, Q, P)
        return val, u, w, "l1-enumeration"
    if P.is_inner_product and Q.is_inner_product:
        val, u, w = _exact_inner(M, P, Q)
        return val, u, w, "singular-value"
    if P.kind == "unitized":
        sub = _exact(M[:-1], P.base, Q)
        if sub is not None:
            w2, v2 = Q.maximizer(M[-1])
            val, ua, w, meth = sub
            if val >= v2:
                return val, np.append(ua, 0.0), w, meth
            u = np.zeros(n, dtype=complex)
            u[-1] = 1.0
            return v2, u, w2, meth
    if Q.kind == "unitized":
        sub = _exact(M.T, Q, P)
        if sub is not None:
            val, w, u, meth = sub
            return val, u, w, meth
    return None


def _ascend_batch(M, P, Q, W, max_iter, rtol):
    """Alternating maximization from every row of W at once."""
    U, val = P.maximizer_rows(W @ M.T)
    prev = np.full(len(W), -1.0)
    for _ in range(max_iter):
        W, val = Q.maximizer_rows(U @ M)
        U, val2 = P.maximizer_rows(W @ M.T)
        val = np.maximum(val, val2)
        if np.all(val - prev <= rtol * np.maximum(1.0, val)):
            break
        prev = val
    W, val = Q.maximizer_rows(U @ M)
    return val, U, W


def _starts(M, P, Q, restarts, rng):
    n, m = M.shape
    starts = []
    # leading right singular vector of the raw matrix
    try:
        _, _, Vh = np.linalg.svd(M)
        starts.append(Vh[0].conj())
    except np.linalg.LinAlgError:
        pass
    for j in range(min(m, 8)):
        e = np.zeros(m, dtype=complex)
        e[j] = 1.0
        starts.append(e)
    if Q.is_linf_type and m <= 12:
        k = min(2 ** m, 64)
        for idx in rng.choice(2 ** m, size=k, replace=False):
            bits = (int(idx) >> np.arange(m)) & 1
            starts.append((1.0 - 2.0 * bits).astype(complex))
    while len(starts) < restarts:
        starts.append(rng.standard_normal(m) + 1j * rng.standard_normal(m))
    return starts


def bilinear_max(M, P: NormSpec, Q: NormSpec, restarts: int = 32, seed: int = DEFAULT_SEED,
                 max_iter: int = 500, rtol: float = 1e-14, exact: bool = True,
                 init=None) -> BilinearResult:
    """sup |u^T M w| over u in the unit ball of P and w in the unit ball of Q."""
    M = np.asarray(M, dtype=complex)
    n, m = M.shape
    if P.dim != n or Q.dim != m:
        raise ValueError("dimension mismatch between matrix and norms")
    if not np.any(M):
        u = P.maximizer(np.eye(n, dtype=complex)[0])[0]
        w = Q.maximizer(np.eye(m, dtype=complex)[0])[0]
        return BilinearResult(0.0, u, w, True, 0, 0, "zero")
    if exact:
        ex = _exact(M, P, Q)
        if ex is not None:
            val, u, w, meth = ex
            return BilinearResult(float(val), u, w, True, 0, 0, meth)
    rng = np.random.default_rng(seed)
    starts = _starts(M, P, Q, restarts, rng)
    if init is not None:
        starts = [np.asarray(w, dtype=complex) for w in init] + starts
    vals, U, W = _ascend_batch(M, P, Q, np.array(starts), max_iter, rtol)
    cands = [(float(v), u, w) for v, u, w in zip(vals, U, W)]
    # deterministic merge: max by value, ties to the lowest restart index
    vals = np.array([c[0] for c in cands])
    best = int(np.argmax(vals))
    top = vals[best]
    agree = int(np.sum(vals >= top - 1e-9 * max(1.0, top)))
    order = np.argsort(-vals, kind="stable")
    cands = [cands[i] for i in order]
    val, u, w = cands[0]
    return BilinearResult(float(val), u, w, False, len(vals), agree, "alternating", cands)
