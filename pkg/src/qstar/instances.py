"""Bundled instance suite and seeded instance generators."""
from __future__ import annotations

from typing import Dict, List, Optional

import numpy as np

from .algebra import (QuasiPair, StarAlgebraModel, change_basis, cyclic_group_algebra,
                      matrix_algebra, pointwise_algebra, scalar_algebra)
from .bilinear import DEFAULT_SEED
from .lp_models import make_lp_pair
from .norms import NormSpec, gram, lp

__all__ = [
    "truncated_polynomial_algebra",
    "nilpotent_pair",
    "hilbert_pair",
    "random_star_pair",
    "generate_instance",
    "bundled_suite",
    "bundled_by_label",
    "GENERATOR_KINDS",
]

GENERATOR_KINDS = ("random-star-algebra", "lp-grid", "nilpotent", "hilbert")


def truncated_polynomial_algebra(d: int) -> StarAlgebraModel:
    """C[x]/(x^d) with basis 1, x, ..., x^(d-1) and x* = x."""
    if d < 1:
        raise ValueError("dimension must be positive")
    C = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d - i):
            C[i, j, i + j] = 1.0
    e = np.zeros(d)
    e[0] = 1.0
    return StarAlgebraModel(C, np.eye(d), e)


def nilpotent_pair(dim: int = 2, label: str = "") -> QuasiPair:
    """A unital pair with a nonzero nilpotent self-adjoint element; never *-semisimple."""
    if dim < 2:
        raise ValueError("the nilpotent instance needs dim >= 2")
    return QuasiPair.make(truncated_polynomial_algebra(dim), lp(2, dim), label or f"nilpotent-{dim}",
                          {"model": "nilpotent"})


def hilbert_pair(k: int = 2, label: str = "") -> QuasiPair:
    """M_k with the normalized Hilbert-Schmidt inner product (||I|| = 1)."""
    return QuasiPair.make(matrix_algebra(k), gram(np.eye(k * k) / k), label or f"matrix-{k}-hs",
                          {"model": "hilbert"})


def random_star_pair(seed: int = DEFAULT_SEED, label: str = "") -> QuasiPair:
    """A group or matrix algebra with its Hilbert norm, in a random complex basis.

    Associativity and the involution laws hold by construction; the Gram matrix is
    transported with the basis so the involution stays isometric.
    """
    rng = np.random.default_rng(seed)
    kind = int(rng.integers(3))
    if kind == 0:
        alg, G = cyclic_group_algebra(2), np.eye(2)
    elif kind == 1:
        alg, G = cyclic_group_algebra(3), np.eye(3)
    else:
        alg, G = matrix_algebra(2), np.eye(4) / 2
    n = alg.dim
    while True:
        P = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(P) < 50:
            break
    A = change_basis(alg, P)
    G2 = P.conj().T @ G @ P
    return QuasiPair.make(A, gram((G2 + G2.conj().T) / 2), label or f"random-star-{seed}",
                          {"model": "random-star-algebra"})


def generate_instance(kind: str, seed: int = DEFAULT_SEED, n: Optional[int] = None,
                      p: Optional[float] = None, dim: Optional[int] = None) -> QuasiPair:
    if kind == "random-star-algebra":
        if dim is not None or n is not None:
            raise ValueError("random-star-algebra draws its dimension from the seed")
        return random_star_pair(seed)
    if kind == "lp-grid":
        return make_lp_pair(4 if n is None else n, 2.0 if p is None else p).pair
    if kind == "nilpotent":
        return nilpotent_pair(2 if dim is None else dim)
    if kind == "hilbert":
        if dim is not None and dim < 1:
            raise ValueError("hilbert needs dim >= 1")
        return hilbert_pair(2 if dim is None else dim)
    raise ValueError(f"unknown instance kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}")


def bundled_suite() -> List[QuasiPair]:
    """Small pairs covering every model, sorted by label."""
    pairs = [
        QuasiPair.make(scalar_algebra(), lp(2, 1), "scalar", {"model": "scalar"}),
        make_lp_pair(2, 2).pair,
        make_lp_pair(3, 1).pair,
        make_lp_pair(3, 2).pair,
        hilbert_pair(2),
        QuasiPair.make(cyclic_group_algebra(3), lp(2, 3), "cyclic-3-l2", {"model": "group"}),
        nilpotent_pair(2),
    ]
    return sorted(pairs, key=lambda q: q.label)


def bundled_by_label() -> Dict[str, QuasiPair]:
    return {q.label: q for q in bundled_suite()}
