"""Finite-dimensional *-algebras and quasi *-algebra pairs.

A and A0 share one coordinate space C^n.  The product is given by structure
constants C with x.y = sum_{ijk} C[i,j,k] x_i y_j e_k and the involution by a
matrix J with x* = J conj(x).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .norms import NormSpec, unitized_norm, _cplx_json, _cplx_parse

__all__ = [
    "StarAlgebraModel",
    "QuasiPair",
    "UnitNormWarning",
    "multiply",
    "module_action",
    "unitize",
    "pointwise_algebra",
    "matrix_algebra",
    "cyclic_group_algebra",
    "dual_numbers",
    "scalar_algebra",
    "change_basis",
]


class UnitNormWarning(UserWarning):
    """Raised when a unit of norm different from one is renormalized."""


@dataclass(frozen=True, eq=False)
class StarAlgebraModel:
    structure: np.ndarray
    involution: np.ndarray
    unit: Optional[np.ndarray] = None

    def __post_init__(self):
        C = np.asarray(self.structure, dtype=complex)
        if C.ndim != 3 or not (C.shape[0] == C.shape[1] == C.shape[2]):
            raise ValueError("structure constants must be an n x n x n tensor")
        n = C.shape[0]
        J = np.asarray(self.involution, dtype=complex)
        if J.shape != (n, n):
            raise ValueError("involution matrix has wrong shape")
        object.__setattr__(self, "structure", C)
        object.__setattr__(self, "involution", J)
        if self.unit is not None:
            e = np.asarray(self.unit, dtype=complex).reshape(-1)
            if e.size != n:
                raise ValueError("unit has wrong dimension")
            object.__setattr__(self, "unit", e)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def has_unit(self) -> bool:
        return self.unit is not None

    def mul(self, x, y):
        return np.einsum("ijk,i,j->k", self.structure, np.asarray(x, dtype=complex),
                         np.asarray(y, dtype=complex))

    def star(self, x):
        return self.involution @ np.conj(np.asarray(x, dtype=complex))

    def left_matrix(self, x):
        """Matrix of a -> x.a."""
        return np.einsum("ijk,i->kj", self.structure, np.asarray(x, dtype=complex))

    def right_matrix(self, x):
        """Matrix of a -> a.x."""
        return np.einsum("ijk,j->ki", self.structure, np.asarray(x, dtype=complex))

    def basis_products(self):
        """P[i,j] = e_i e_j as coordinate vectors."""
        return self.structure

    def star_products(self):
        """T[i,j] = e_i* e_j as coordinate vectors."""
        T = self._star_products
        return T

    @property
    def _star_products(self):
        # (e_i)* = J[:, i]; (e_i)* e_j = sum_p J[p,i] C[p,j,:]
        return np.einsum("pi,pjk->ijk", self.involution, self.structure)

    def invariant_residuals(self) -> dict:
        C, J = self.structure, self.involution
        n = self.dim
        scale = max(1.0, np.abs(C).max())
        # (e_i e_j) e_k - e_i (e_j e_k)
        lhs = np.einsum("ijp,pkq->ijkq", C, C)
        rhs = np.einsum("jkp,ipq->ijkq", C, C)
        assoc = np.abs(lhs - rhs).max() / scale
        invol = np.abs(J @ np.conj(J) - np.eye(n)).max()
        # (e_i e_j)* = e_j* e_i*
        left = np.einsum("qk,ijk->ijq", J, np.conj(C))
        ej_star = J  # column j is e_j*
        right = np.einsum("pj,ri,prq->ijq", ej_star, J, C)
        antimult = np.abs(left - right).max() / scale
        out = {"associativity": float(assoc), "involutive": float(invol),
               "antimultiplicative": float(antimult)}
        if self.unit is not None:
            L = self.left_matrix(self.unit)
            R = self.right_matrix(self.unit)
            out["unit"] = float(max(np.abs(L - np.eye(n)).max(), np.abs(R - np.eye(n)).max()))
        return out

    def to_json(self) -> dict:
        d = {"dim": self.dim, "structure_constants": _cplx_json(self.structure),
             "involution": _cplx_json(self.involution)}
        if self.unit is not None:
            d["unit"] = _cplx_json(self.unit)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "StarAlgebraModel":
        C = _cplx_parse(d["structure_constants"])
        J = _cplx_parse(d["involution"])
        e = _cplx_parse(d["unit"]) if d.get("unit") is not None else None
        n = int(d["dim"])
        if C.shape != (n, n, n):
            raise ValueError("structure constants do not match dim")
        return cls(C, J, e)


@dataclass(frozen=True, eq=False)
class QuasiPair:
    """A quasi *-algebra model: an algebra with a coarse norm on A."""

    algebra: StarAlgebraModel
    normA: NormSpec
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.normA.dim != self.algebra.dim:
            raise ValueError("norm dimension does not match the algebra")

    @classmethod
    def make(cls, algebra, normA, label="", meta=None, normalize_unit=True):
        """Build a pair, rescaling the norm so that the unit has norm one."""
        meta = dict(meta or {})
        if normalize_unit and algebra.unit is not None:
            ne = normA.eval(algebra.unit)
            if abs(ne - 1.0) > 1e-12:
                warnings.warn(f"unit has norm {ne:.6g}; rescaling the norm so that ||e|| = 1",
                              UnitNormWarning, stacklevel=2)
                normA = normA.scaled(1.0 / ne)
                meta["unit_rescaled_by"] = 1.0 / ne
        return cls(algebra, normA, label, meta)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def unit(self):
        return self.algebra.unit

    def to_json(self) -> dict:
        d = self.algebra.to_json()
        d["norm"] = self.normA.to_json()
        d["label"] = self.label
        if self.meta.get("model"):
            d["model"] = self.meta["model"]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "QuasiPair":
        alg = StarAlgebraModel.from_json(d)
        nd = dict(d["norm"])
        nd.setdefault("dim", alg.dim)
        norm = NormSpec.from_json(nd)
        meta = {"model": d["model"]} if "model" in d else {}
        return cls.make(alg, norm, d.get("label", ""), meta)


def multiply(alg: StarAlgebraModel, x, y):
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != (alg.dim,) or y.shape != (alg.dim,):
        raise ValueError("dimension mismatch")
    return alg.mul(x, y)


def module_action(pair: QuasiPair, side: str, x, a):
    """x.a (side='left') or a.x (side='right') for x in A0 and a in A."""
    if side == "left":
        return multiply(pair.algebra, x, a)
    if side == "right":
        return multiply(pair.algebra, a, x)
    raise ValueError("side must be 'left' or 'right'")


def unitize(pair: QuasiPair) -> QuasiPair:
    """Adjoin a unit; the norm becomes ||(a, lam)|| = ||a|| + |lam|."""
    alg = pair.algebra
    if alg.has_unit:
        raise ValueError("pair is already unital")
    n = alg.dim
    C = np.zeros((n + 1, n + 1, n + 1), dtype=complex)
    C[:n, :n, :n] = alg.structure
    idx = np.arange(n + 1)
    C[n, idx, idx] = 1.0
    C[idx, n, idx] = 1.0
    J = np.zeros((n + 1, n + 1), dtype=complex)
    J[:n, :n] = alg.involution
    J[n, n] = 1.0
    e = np.zeros(n + 1, dtype=complex)
    e[n] = 1.0
    meta = dict(pair.meta)
    meta["unitized_from"] = pair.label
    return QuasiPair(StarAlgebraModel(C, J, e), unitized_norm(pair.normA),
                     (pair.label + "+unit") if pair.label else "unitized", meta)


# builders ---------------------------------------------------------------------
def pointwise_algebra(n: int, unital: bool = True) -> StarAlgebraModel:
    C = np.zeros((n, n, n), dtype=complex)
    C[np.arange(n), np.arange(n), np.arange(n)] = 1.0
    return StarAlgebraModel(C, np.eye(n), np.ones(n) if unital else None)


def matrix_algebra(k: int) -> StarAlgebraModel:
    """M_k with basis E_ab at index a*k + b."""
    n = k * k
    C = np.zeros((n, n, n), dtype=complex)
    J = np.zeros((n, n), dtype=complex)
    for a in range(k):
        for b in range(k):
            J[b * k + a, a * k + b] = 1.0
            for d in range(k):
                C[a * k + b, b * k + d, a * k + d] = 1.0
    return StarAlgebraModel(C, J, np.eye(k).reshape(-1))


def cyclic_group_algebra(n: int) -> StarAlgebraModel:
    C = np.zeros((n, n, n), dtype=complex)
    J = np.zeros((n, n), dtype=complex)
    for g in range(n):
        J[(-g) % n, g] = 1.0
        for h in range(n):
            C[g, h, (g + h) % n] = 1.0
    e = np.zeros(n)
    e[0] = 1.0
    return StarAlgebraModel(C, J, e)


def dual_numbers() -> StarAlgebraModel:
    """Span{e, eps} with eps^2 = 0 and eps* = eps."""
    C = np.zeros((2, 2, 2), dtype=complex)
    C[0, 0, 0] = 1.0
    C[0, 1, 1] = 1.0
    C[1, 0, 1] = 1.0
    return StarAlgebraModel(C, np.eye(2), np.array([1.0, 0.0]))


def scalar_algebra() -> StarAlgebraModel:
    return StarAlgebraModel(np.ones((1, 1, 1)), np.eye(1), np.ones(1))


def change_basis(alg: StarAlgebraModel, P) -> StarAlgebraModel:
    """Express the algebra in the basis f_i = sum_k P[k,i] e_k."""
    P = np.asarray(P, dtype=complex)
    Pi = np.linalg.inv(P)
    C = np.einsum("ai,bj,abc,kc->ijk", P, P, alg.structure, Pi)
    J = Pi @ alg.involution @ np.conj(P)
    e = None if alg.unit is None else Pi @ alg.unit
    return StarAlgebraModel(C, J, e)
