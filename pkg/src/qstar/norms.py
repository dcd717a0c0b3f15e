"""Norms on finite coordinate spaces.

Every norm knows how to evaluate itself, how to produce its dual, and how to
solve the linear maximization problem over its unit ball (the "maximizer").
The maximizer is the single primitive the optimizers in this package rely on:
for a coefficient vector c it returns u in the unit ball with
sum(c * u) = dual_norm(c), using the bilinear pairing <c, u> = sum c_i u_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "NormSpec",
    "eval_norm",
    "dual_norm",
    "lp",
    "weighted",
    "gram",
    "unitized_norm",
    "conjugate_exponent",
    "phase",
]


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    return p / (p - 1.0)


def phase(c):
    """Unit-modulus phases of c, with 1 where c vanishes."""
    c = np.asarray(c, dtype=complex)
    a = np.abs(c)
    out = np.ones_like(c)
    nz = a > 0
    out[nz] = c[nz] / a[nz]
    return out


def _lp_value(v, p):
    a = np.abs(v)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p == 1:
        return float(a.sum())
    if p == 2:
        return float(np.sqrt(np.sum(a * a)))
    m = a.max() if a.size else 0.0
    if m == 0:
        return 0.0
    return float(m * np.sum((a / m) ** p) ** (1.0 / p))


def _lp_maximizer(c, p):
    """Maximize Re sum(c*u) over the unit ball of the (unweighted) p-norm."""
    c = np.asarray(c, dtype=complex)
    n = c.size
    a = np.abs(c)
    u = np.zeros(n, dtype=complex)
    if np.isinf(p):
        u[:] = np.conj(phase(c))
        return u, float(a.sum())
    if p == 1:
        k = int(np.argmax(a))
        u[k] = np.conj(phase(c[k:k + 1]))[0]
        return u, float(a[k])
    q = conjugate_exponent(p)
    val = _lp_value(c, q)
    if val == 0:
        u[0] = 1.0
        return u, 0.0
    u[:] = np.conj(phase(c)) * (a / val) ** (q - 1.0)
    return u, val


def _lp_maximizer_rows(C, p):
    A = np.abs(C)
    ph = np.conj(phase(C))
    U = np.zeros_like(C)
    if np.isinf(p):
        return ph, A.sum(axis=1)
    if p == 1:
        k = np.argmax(A, axis=1)
        r = np.arange(C.shape[0])
        U[r, k] = ph[r, k]
        return U, A[r, k]
    q = conjugate_exponent(p)
    m = A.max(axis=1, keepdims=True)
    m[m == 0] = 1.0
    vals = (m[:, 0] * ((A / m) ** q).sum(axis=1) ** (1.0 / q))
    safe = np.where(vals > 0, vals, 1.0)[:, None]
    U = ph * (A / safe) ** (q - 1.0)
    U[vals == 0] = 0.0
    U[vals == 0, 0] = 1.0
    return U, vals


@dataclass(frozen=True, eq=False)
class NormSpec:
    """A norm on C^dim.

    kind is one of
      p           the l^p norm
      weighted    (sum w_i |v_i|^p)^(1/p), stored through scale s = w^(1/p)
                  so that the norm is the l^p norm of s*v (s = w for p = inf)
      gram        sqrt(v^H G v) with G Hermitian positive definite
      unitized    ||a|| + |lam| on (a, lam), the last coordinate is the unit
      unitized_dual  max(||a||, |lam|), dual of the unitized norm
      injective   lambda cross-norm of (left, right) on row-major coordinates
      projective  gamma cross-norm of (left, right)
      custom      user supplied evaluator and ball maximizer
    """

    kind: str
    dim: int
    p: Optional[float] = None
    scale: Optional[np.ndarray] = None
    gram: Optional[np.ndarray] = None
    base: Optional["NormSpec"] = None
    left: Optional["NormSpec"] = None
    right: Optional["NormSpec"] = None
    evaluator: Optional[Callable] = None
    ball_maximizer: Optional[Callable] = None
    custom_dual: Optional[Callable] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind in ("p", "weighted"):
            if self.p is None or not (self.p >= 1):
                raise ValueError("p must be in [1, inf]")
        if self.kind == "weighted":
            s = np.asarray(self.scale, dtype=float)
            if s.shape != (self.dim,) or np.any(~(s > 0)) or not np.all(np.isfinite(s)):
                raise ValueError("weights must be strictly positive")
            object.__setattr__(self, "scale", s)
        if self.kind == "gram":
            G = np.asarray(self.gram, dtype=complex)
            if G.shape != (self.dim, self.dim):
                raise ValueError("gram has wrong shape")
            if np.abs(G - G.conj().T).max() > 1e-12 * max(1.0, np.abs(G).max()):
                raise ValueError("gram must be Hermitian")
            G = (G + G.conj().T) / 2
            if np.linalg.eigvalsh(G).min() <= 0:
                raise ValueError("gram must be positive definite")
            object.__setattr__(self, "gram", G)
        if self.kind in ("unitized", "unitized_dual"):
            if self.base is None or self.base.dim + 1 != self.dim:
                raise ValueError("unitized norm needs a base of dimension dim-1")
        if self.kind in ("injective", "projective"):
            if self.left is None or self.right is None or self.left.dim * self.right.dim != self.dim:
                raise ValueError("cross-norm factors inconsistent with dim")
        if self.kind == "custom" and self.evaluator is None:
            raise ValueError("custom norm needs an evaluator")
        if self.kind not in ("p", "weighted", "gram", "unitized", "unitized_dual",
                             "injective", "projective", "custom"):
            raise ValueError(f"unknown norm kind {self.kind!r}")

    # evaluation -----------------------------------------------------------
    def __call__(self, v) -> float:
        return self.eval(v)

    def eval(self, v) -> float:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != self.dim:
            raise ValueError(f"dimension mismatch: expected {self.dim}, got {v.size}")
        k = self.kind
        if k == "p":
            return _lp_value(v, self.p)
        if k == "weighted":
            return _lp_value(self.scale * v, self.p)
        if k == "gram":
            return float(np.sqrt(max(np.real(np.vdot(v, self.gram @ v)), 0.0)))
        if k == "unitized":
            return self.base.eval(v[:-1]) + abs(v[-1])
        if k == "unitized_dual":
            return max(self.base.eval(v[:-1]), abs(v[-1]))
        if k in ("injective", "projective"):
            from . import crossnorms
            M = v.reshape(self.left.dim, self.right.dim)
            z = crossnorms.TensorElement(M, self.left, self.right)
            if k == "injective":
                return crossnorms.injective_norm(z).value
            return crossnorms.projective_norm(z).value
        return float(self.evaluator(v))

    # structure ------------------------------------------------------------
    @property
    def is_inner_product(self) -> bool:
        return self.kind == "gram" or (self.kind in ("p", "weighted") and self.p == 2)

    @property
    def is_l1_type(self) -> bool:
        """Unit ball is the absolutely convex hull of finitely many points."""
        return self.kind in ("p", "weighted") and self.p == 1

    @property
    def is_linf_type(self) -> bool:
        return self.kind in ("p", "weighted") and np.isinf(self.p)

    def lp_scale(self):
        """(p, s) with norm(v) = ||s*v||_p for l^p and weighted kinds."""
        if self.kind == "p":
            return self.p, np.ones(self.dim)
        if self.kind == "weighted":
            return self.p, self.scale
        raise TypeError("not an l^p type norm")

    def gram_matrix(self) -> np.ndarray:
        """Gram matrix of an inner-product norm."""
        if self.kind == "gram":
            return self.gram
        if self.is_inner_product:
            _, s = self.lp_scale()
            return np.diag((s * s).astype(complex))
        raise TypeError("not an inner-product norm")

    def chol_factor(self) -> np.ndarray:
        """Upper factor R with norm(v) = ||R v||_2 (inner-product norms)."""
        R = self._cache.get("R")
        if R is None:
            if self.kind == "gram":
                R = np.linalg.cholesky(self.gram).conj().T
            else:
                _, s = self.lp_scale()
                R = np.diag(s.astype(complex))
            self._cache["R"] = R
        return R

    def extreme_points(self):
        """Extreme points (up to unimodular phase) of an l1-type ball."""
        if not self.is_l1_type:
            return None
        _, s = self.lp_scale()
        return np.diag(1.0 / s).astype(complex)

    def dual(self) -> "NormSpec":
        d = self._cache.get("dual")
        if d is not None:
            return d
        k = self.kind
        if k == "p":
            d = NormSpec("p", self.dim, p=conjugate_exponent(self.p))
        elif k == "weighted":
            d = NormSpec("weighted", self.dim, p=conjugate_exponent(self.p), scale=1.0 / self.scale)
        elif k == "gram":
            # bilinear pairing: the dual of sqrt(v^H G v) has Gram conj(G)^{-1}
            Gi = np.linalg.inv(np.conj(self.gram))
            d = NormSpec("gram", self.dim, gram=(Gi + Gi.conj().T) / 2)
        elif k == "unitized":
            d = NormSpec("unitized_dual", self.dim, base=self.base.dual())
        elif k == "unitized_dual":
            d = NormSpec("unitized", self.dim, base=self.base.dual())
        elif k == "injective":
            d = NormSpec("projective", self.dim, left=self.left.dual(), right=self.right.dual())
        elif k == "projective":
            d = NormSpec("injective", self.dim, left=self.left.dual(), right=self.right.dual())
        elif self.custom_dual is not None:
            d = self.custom_dual()
        else:
            raise NotImplementedError("custom norm without a registered dual")
        self._cache["dual"] = d
        return d

    def maximizer(self, c):
        """Return (u, value): u in the unit ball, sum(c*u) = value = dual norm of c."""
        c = np.asarray(c, dtype=complex).reshape(-1)
        if c.size != self.dim:
            raise ValueError("dimension mismatch")
        k = self.kind
        if k == "p":
            return _lp_maximizer(c, self.p)
        if k == "weighted":
            u, val = _lp_maximizer(c / self.scale, self.p)
            return u / self.scale, val
        if k == "gram":
            R = self.chol_factor()
            c2 = np.linalg.solve(R.T, c)
            u0, val = _lp_maximizer(c2, 2)
            return np.linalg.solve(R, u0), val
        if k == "unitized":
            ua, va = self.base.maximizer(c[:-1])
            vl = abs(c[-1])
            u = np.zeros(self.dim, dtype=complex)
            if va >= vl:
                u[:-1] = ua
                return u, va
            u[-1] = np.conj(phase(c[-1:]))[0]
            return u, vl
        if k == "unitized_dual":
            ua, va = self.base.maximizer(c[:-1])
            u = np.zeros(self.dim, dtype=complex)
            u[:-1] = ua
            u[-1] = np.conj(phase(c[-1:]))[0]
            return u, va + abs(c[-1])
        if k in ("injective", "projective"):
            from . import crossnorms
            C = c.reshape(self.left.dim, self.right.dim)
            return crossnorms.crossnorm_ball_maximizer(self, C)
        if self.ball_maximizer is None:
            raise NotImplementedError("custom norm without a ball maximizer")
        u, val = self.ball_maximizer(c)
        return np.asarray(u, dtype=complex), float(val)

    def maximizer_rows(self, C):
        """Row-wise maximizer for a batch of coefficient vectors."""
        C = np.asarray(C, dtype=complex)
        k = self.kind
        if k in ("p", "weighted", "gram"):
            if k == "gram":
                R = self.chol_factor()
                C2 = np.linalg.solve(R.T, C.T).T
                U0, vals = _lp_maximizer_rows(C2, 2)
                return np.linalg.solve(R, U0.T).T, vals
            p, s = self.lp_scale()
            U0, vals = _lp_maximizer_rows(C / s, p)
            return U0 / s, vals
        out = [self.maximizer(c) for c in C]
        return np.array([o[0] for o in out]), np.array([o[1] for o in out])

    def dual_eval(self, c) -> float:
        """Dual norm of c computed through the ball maximizer."""
        return self.maximizer(c)[1]

    def scaled(self, factor: float) -> "NormSpec":
        """The norm factor * ||.||."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        k = self.kind
        if k == "p":
            return NormSpec("weighted", self.dim, p=self.p, scale=np.full(self.dim, float(factor)))
        if k == "weighted":
            return NormSpec("weighted", self.dim, p=self.p, scale=self.scale * factor)
        if k == "gram":
            return NormSpec("gram", self.dim, gram=self.gram * factor ** 2)
        if k == "custom":
            ev, mx = self.evaluator, self.ball_maximizer
            return NormSpec(
                "custom", self.dim,
                evaluator=lambda v: factor * ev(v),
                ball_maximizer=None if mx is None else (lambda c: _scaled_max(mx, c, factor)),
            )
        raise NotImplementedError(f"cannot rescale a {k} norm")

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        k = self.kind
        if k == "p":
            return {"kind": "p", "dim": self.dim, "p": _p_json(self.p)}
        if k == "weighted":
            return {"kind": "weighted", "dim": self.dim, "p": _p_json(self.p),
                    "weights": self.weights().tolist()}
        if k == "gram":
            return {"kind": "gram", "dim": self.dim, "gram": _cplx_json(self.gram)}
        if k in ("unitized", "unitized_dual"):
            return {"kind": k, "dim": self.dim, "base": self.base.to_json()}
        if k in ("injective", "projective"):
            return {"kind": k, "dim": self.dim, "left": self.left.to_json(),
                    "right": self.right.to_json()}
        raise NotImplementedError("custom norms are not serializable")

    def weights(self) -> np.ndarray:
        """Weights w of a weighted norm, (sum w|v|^p)^(1/p)."""
        if np.isinf(self.p):
            return self.scale.copy()
        return self.scale ** self.p

    @classmethod
    def from_json(cls, d: dict) -> "NormSpec":
        k = d["kind"]
        dim = int(d["dim"])
        if k == "p":
            return lp(_p_parse(d["p"]), dim)
        if k == "weighted":
            return weighted(_p_parse(d["p"]), d["weights"])
        if k == "gram":
            return gram(_cplx_parse(d["gram"]))
        if k in ("unitized", "unitized_dual"):
            return cls(k, dim, base=cls.from_json(d["base"]))
        if k in ("injective", "projective"):
            return cls(k, dim, left=cls.from_json(d["left"]), right=cls.from_json(d["right"]))
        raise ValueError(f"unknown norm kind {k!r}")


def _scaled_max(mx, c, factor):
    u, val = mx(c)
    return np.asarray(u) / factor, val / factor


def _p_json(p):
    return "inf" if np.isinf(p) else float(p)


def _p_parse(p):
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            return np.inf
        return float(p)
    return float(p)


def _cplx_json(A):
    A = np.asarray(A, dtype=complex)
    return np.stack([A.real, A.imag], axis=-1).tolist()


def _cplx_parse(x):
    a = np.asarray(x, dtype=float)
    if a.ndim == 0 or a.shape[-1] != 2:
        raise ValueError("complex arrays are encoded as [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


# constructors ----------------------------------------------------------------
def lp(p, dim: int) -> NormSpec:
    return NormSpec("p", int(dim), p=float(p))


def weighted(p, weights) -> NormSpec:
    w = np.asarray(weights, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError("weights must be strictly positive")
    p = float(p)
    s = w if np.isinf(p) else w ** (1.0 / p)
    return NormSpec("weighted", w.size, p=p, scale=s)


def gram(G) -> NormSpec:
    G = np.asarray(G, dtype=complex)
    return NormSpec("gram", G.shape[0], gram=G)


def unitized_norm(base: NormSpec) -> NormSpec:
    return NormSpec("unitized", base.dim + 1, base=base)


def eval_norm(spec: NormSpec, v) -> float:
    return spec.eval(v)


def dual_norm(spec: NormSpec) -> NormSpec:
    return spec.dual()
