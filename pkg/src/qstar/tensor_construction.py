"""Tensor product quasi *-algebras and their cross-normed versions.

Tensor coordinates are row-major over (left index, right index), so the
coefficient matrix M of z = sum M_ij e_i (x) f_j flattens to M.reshape(-1)
and every Kronecker product follows np.kron.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .algebra import QuasiPair, StarAlgebraModel
from .bilinear import DEFAULT_SEED
from .crossnorms import TensorElement, canonical_tag, crossnorm_spec, crossnorm_value
from .operators import left_mult, operator_norm, right_mult
from .validation import random_vectors

__all__ = [
    "TensorQuasiPair",
    "ConstructionReport",
    "build_tensor_pair",
    "tensor_algebra",
    "verify_construction",
    "verify_action_factorization",
    "verify_involution_isometry",
    "combined_a0_norm_consistency",
]


@dataclass(frozen=True, eq=False)
class TensorQuasiPair:
    left: QuasiPair
    right: QuasiPair
    crossnorm: str
    combined: QuasiPair

    @property
    def shape(self):
        return self.left.dim, self.right.dim

    def element(self, M) -> TensorElement:
        return TensorElement(np.asarray(M, dtype=complex).reshape(self.shape),
                             self.left.normA, self.right.normA)

    def norm(self, c, **kw):
        """Cross-norm of combined coordinates c, as a CrossNormResult."""
        return crossnorm_value(self.crossnorm, self.element(c), **kw)

    def to_json(self):
        return {"left_ref": self.left.label, "right_ref": self.right.label,
                "crossnorm": self.crossnorm, "combined": self.combined.to_json()}


def tensor_algebra(A: StarAlgebraModel, B: StarAlgebraModel) -> StarAlgebraModel:
    n, m = A.dim, B.dim
    C = np.einsum("ikp,jlq->ijklpq", A.structure, B.structure).reshape(n * m, n * m, n * m)
    J = np.kron(A.involution, B.involution)
    e = np.kron(A.unit, B.unit) if (A.unit is not None and B.unit is not None) else None
    return StarAlgebraModel(C, J, e)


def build_tensor_pair(P: QuasiPair, Q: QuasiPair, crossnorm: str = "gamma") -> TensorQuasiPair:
    tag = canonical_tag(crossnorm)
    try:
        N = crossnorm_spec(tag, P.normA, Q.normA)
    except NotImplementedError as exc:
        raise ValueError(f"unsupported cross-norm {tag} for these factor norms: {exc}") from exc
    alg = tensor_algebra(P.algebra, Q.algebra)
    label = f"{P.label}(x){tag}{Q.label}"
    # cross property gives ||e_A (x) e_B|| = 1 for normalized factors, no rescaling
    combined = QuasiPair(alg, N, label, {"left": P.label, "right": Q.label, "crossnorm": tag})
    return TensorQuasiPair(P, Q, tag, combined)


@dataclass
class ConstructionReport:
    name: str
    residuals: dict = field(default_factory=dict)
    tol: float = 1e-12
    inconclusive: List[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "tol": self.tol,
                "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
                "inconclusive": list(self.inconclusive)}


def _rel(u, v):
    return float(np.abs(u - v).max() / max(1.0, np.abs(u).max(), np.abs(v).max()))


def verify_construction(tp: TensorQuasiPair, trials: int = 10, seed: int = DEFAULT_SEED) -> ConstructionReport:
    """Kronecker structure, involution, unit, associativity and the star law."""
    rng = np.random.default_rng(seed)
    A, B, T = tp.left.algebra, tp.right.algebra, tp.combined.algebra
    n, m = A.dim, B.dim
    rep = ConstructionReport("construction")
    r = rep.residuals
    # structure constants against the product rule (xa) (x) (yb)
    Cd = np.zeros_like(T.structure)
    for i in range(n):
        for j in range(m):
            for k in range(n):
                for l in range(m):
                    Cd[i * m + j, k * m + l] = np.kron(A.structure[i, k], B.structure[j, l])
    r["structure"] = _rel(T.structure, Cd)
    inv = star = assoc = prod = 0.0
    for _ in range(trials):
        a, x = random_vectors(rng, n, 2)
        b, y = random_vectors(rng, m, 2)
        inv = max(inv, _rel(T.star(np.kron(a, b)), np.kron(A.star(a), B.star(b))))
        prod = max(prod, _rel(T.mul(np.kron(x, y), np.kron(a, b)), np.kron(A.mul(x, a), B.mul(y, b))))
        u, v = np.kron(a, b), np.kron(x, y)
        star = max(star, _rel(T.star(T.mul(u, v)), T.mul(T.star(v), T.star(u))))
        z = random_vectors(rng, n * m, 3)
        assoc = max(assoc, _rel(T.mul(T.mul(z[0], z[1]), z[2]), T.mul(z[0], T.mul(z[1], z[2]))))
    r["involution_elementary"] = inv
    r["product_elementary"] = prod
    r["star_antimultiplicative"] = star
    r["associativity"] = assoc
    r.update({f"algebra_{k}": v for k, v in T.invariant_residuals().items()})
    if T.unit is not None:
        un = 0.0
        for z in random_vectors(rng, n * m, trials):
            un = max(un, _rel(T.mul(T.unit, z), z), _rel(T.mul(z, T.unit), z))
        r["unit"] = un
    return rep


def _random_rank(rng, n, m, rank):
    xs = random_vectors(rng, n, rank)
    ys = random_vectors(rng, m, rank)
    return xs, ys


def verify_action_factorization(tp: TensorQuasiPair, trials: int = 10, seed: int = DEFAULT_SEED,
                                max_rank: int = 3) -> ConstructionReport:
    """R_z = sum R_{x_i} (x) R_{y_i} and L_z likewise, for z = sum x_i (x) y_i."""
    rng = np.random.default_rng(seed)
    A, B, T = tp.left.algebra, tp.right.algebra, tp.combined.algebra
    n, m = A.dim, B.dim
    rep = ConstructionReport("action_factorization")
    rr = lr = act = 0.0
    for t in range(trials):
        xs, ys = _random_rank(rng, n, m, 1 + t % max_rank)
        z = sum(np.kron(x, y) for x, y in zip(xs, ys))
        Rk = sum(np.kron(A.right_matrix(x), B.right_matrix(y)) for x, y in zip(xs, ys))
        Lk = sum(np.kron(A.left_matrix(x), B.left_matrix(y)) for x, y in zip(xs, ys))
        rr = max(rr, _rel(T.right_matrix(z), Rk))
        lr = max(lr, _rel(T.left_matrix(z), Lk))
        c = random_vectors(rng, n * m, 1)[0]
        act = max(act, _rel(T.mul(c, z), Rk @ c), _rel(T.mul(z, c), Lk @ c))
    rep.residuals.update({"right_factorization": rr, "left_factorization": lr, "action": act})
    if T.unit is not None:
        rep.residuals["unit_action"] = _rel(T.right_matrix(T.unit), np.eye(n * m))
    return rep


def _factor_isometric(pair: QuasiPair, rng, k=8, tol=1e-9) -> bool:
    N, alg = pair.normA, pair.algebra
    for a in list(random_vectors(rng, pair.dim, k)) + list(np.eye(pair.dim, dtype=complex)):
        na = N.eval(a)
        if abs(N.eval(alg.star(a)) - na) > tol * max(1.0, na):
            return False
    return True


def verify_involution_isometry(tp: TensorQuasiPair, trials: int = 10, tol: float = 1e-6,
                               seed: int = DEFAULT_SEED, restarts: int = 32) -> ConstructionReport:
    """|crossnorm(z*) - crossnorm(z)| over random z."""
    rng = np.random.default_rng(seed)
    T = tp.combined.algebra
    rep = ConstructionReport("involution_isometry", tol=tol)
    rep.detail["factors_isometric"] = bool(_factor_isometric(tp.left, rng) and _factor_isometric(tp.right, rng))
    worst = 0.0
    nm = T.dim
    for t in range(trials):
        z = random_vectors(rng, nm, 1)[0]
        if t == 0:
            z = (z + T.star(z)) / 2  # a Hermitian element
        a = tp.norm(z, restarts=restarts, seed=seed)
        b = tp.norm(T.star(z), restarts=restarts, seed=seed)
        d = abs(a.value - b.value) / max(1.0, a.value)
        if d > tol and not (a.converged and b.converged):
            rep.inconclusive.append(f"trial {t}: {d:.3g}")
            continue
        worst = max(worst, d)
    rep.residuals["isometry"] = worst
    return rep


def _factor_multiplier(pair: QuasiPair, x, seed):
    rl = operator_norm(left_mult(pair, x), seed=seed)
    rr = operator_norm(right_mult(pair, x), seed=seed)
    return rl, rr


def combined_a0_norm_consistency(tp: TensorQuasiPair, trials: int = 10, tol: float = 1e-6,
                                 seed: int = DEFAULT_SEED, restarts: int = 32) -> ConstructionReport:
    """crossnorm(c (x.y)) <= ||x (x) y||_0 crossnorm(c) on random x (x) y and c.

    The multiplier norm of x (x) y is evaluated through the factors: the cross-norms
    are uniform, so ||L_x (x) L_y|| = ||L_x|| ||L_y|| and likewise on the right.
    """
    rng = np.random.default_rng(seed)
    A, B, T = tp.left.algebra, tp.right.algebra, tp.combined.algebra
    n, m = A.dim, B.dim
    rep = ConstructionReport("a0_norm_consistency", tol=tol)
    worst = -np.inf
    for t in range(trials):
        if t == 0 and T.unit is not None:
            x, y = A.unit, B.unit
        else:
            x = random_vectors(rng, n, 1)[0]
            y = random_vectors(rng, m, 1)[0]
        lx, rx = _factor_multiplier(tp.left, x, seed)
        ly, ry = _factor_multiplier(tp.right, y, seed)
        bound_l = (lx.upper if np.isfinite(lx.upper) else lx.value) * (ly.upper if np.isfinite(ly.upper) else ly.value)
        bound_r = (rx.upper if np.isfinite(rx.upper) else rx.value) * (ry.upper if np.isfinite(ry.upper) else ry.value)
        a0 = max(bound_l, bound_r)
        c = random_vectors(rng, n * m, 1)[0]
        nc = tp.norm(c, restarts=restarts, seed=seed).value
        v = np.kron(x, y)
        for prod in (T.mul(c, v), T.mul(v, c)):
            lhs = tp.norm(prod, restarts=restarts, seed=seed).value
            worst = max(worst, (lhs - a0 * nc) / max(1.0, a0 * nc))
    rep.residuals["excess"] = max(worst, 0.0)
    rep.detail["worst_signed_excess"] = float(worst)
    return rep
