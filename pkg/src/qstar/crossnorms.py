"""Injective, projective and Hilbert cross-norms on tensor coordinates.

A tensor z = sum_ij M[i,j] e_i (x) f_j is stored as its coefficient matrix M;
flattening is row-major, so index (i, j) maps to i*m + j and x (x) y flattens
to np.kron(x, y).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import linprog

from .bilinear import DEFAULT_SEED, bilinear_max
from .norms import NormSpec, gram as gram_norm
from .operators import OperatorMatrix, operator_norm

__all__ = [
    "TensorElement",
    "CrossNormResult",
    "injective_norm",
    "projective_norm",
    "hilbert_norm",
    "crossnorm_spec",
    "crossnorm_value",
    "check_compatibility_sandwich",
    "tensor_operator",
    "check_uniformity",
    "injective_norm_bruteforce",
    "CROSSNORMS",
]

CROSSNORMS = ("lambda", "gamma", "h")
_ALIASES = {"lambda": "lambda", "λ": "lambda", "injective": "lambda",
            "gamma": "gamma", "γ": "gamma", "projective": "gamma",
            "h": "h", "hilbert": "h"}


def canonical_tag(tag: str) -> str:
    try:
        return _ALIASES[tag]
    except KeyError:
        raise ValueError(f"unknown cross-norm {tag!r}") from None


@dataclass(frozen=True, eq=False)
class TensorElement:
    matrix: np.ndarray
    left: NormSpec
    right: NormSpec

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim == 1:
            M = M.reshape(self.left.dim, self.right.dim)
        if M.shape != (self.left.dim, self.right.dim):
            raise ValueError("coefficient matrix inconsistent with the factor norms")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def elementary(cls, x, y, left, right):
        return cls(np.outer(x, y), left, right)

    @classmethod
    def from_decomposition(cls, xs, ys, left, right):
        M = sum(np.outer(x, y) for x, y in zip(xs, ys))
        return cls(M, left, right)

    @property
    def vec(self):
        return self.matrix.reshape(-1)


@dataclass
class CrossNormResult:
    value: float
    lower: float
    upper: float
    converged: bool
    certificate: dict = field(default_factory=dict, repr=False)
    restarts: int = 0
    method: str = ""
    exact: bool = False

    @property
    def gap(self) -> float:
        return max(self.upper - self.lower, 0.0)

    def __float__(self):
        return self.value

    def to_json(self):
        cert = {}
        for k, v in self.certificate.items():
            cert[k] = _jsonable(v)
        return {"value": self.value, "lower": self.lower, "upper": self.upper,
                "certificate": cert, "converged": bool(self.converged),
                "restarts": int(self.restarts), "method": self.method}


def _jsonable(v):
    if isinstance(v, np.ndarray):
        v = np.asarray(v)
        if np.iscomplexobj(v):
            return np.stack([v.real, v.imag], axis=-1).tolist()
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


# injective -------------------------------------------------------------------
def injective_norm(z: TensorElement, restarts: int = 32, seed: int = DEFAULT_SEED) -> CrossNormResult:
    """sup |f^T M g| over the dual unit balls."""
    X, Y = z.left, z.right
    res = bilinear_max(z.matrix, X.dual(), Y.dual(), restarts=restarts, seed=seed)
    cert = {"f": res.u, "g": res.w}
    if res.exact:
        return CrossNormResult(res.value, res.value, res.value, True, cert, 0, res.method, True)
    # gamma dominates lambda, and the row decomposition bounds gamma
    up = _row_bound(z.matrix, X, Y)
    return CrossNormResult(res.value, res.value, max(up, res.value), res.converged, cert,
                           res.restarts, res.method, False)


def _row_bound(M, X, Y):
    n = M.shape[0]
    I = np.eye(n, dtype=complex)
    return float(sum(X.eval(I[i]) * Y.eval(M[i]) for i in range(n) if np.any(M[i])))


# projective ------------------------------------------------------------------
def _l1_closed_form(M, X, Y):
    """gamma on l1-type (x) Y: sum_i s_i Y(row_i)."""
    _, s = X.lp_scale()
    Yd = Y.dual()
    B = np.zeros_like(M)
    atoms = []
    val = 0.0
    for i in range(M.shape[0]):
        r = M[i]
        if not np.any(r):
            continue
        yr = Y.eval(r)
        g, _ = Yd.maximizer(r)
        B[i] = s[i] * g
        x = np.zeros(M.shape[0], dtype=complex)
        x[i] = 1.0 / s[i]
        atoms.append((s[i] * yr, x, r / yr))
        val += s[i] * yr
    return val, B, atoms


def _nuclear_closed_form(M, X, Y):
    R1, R2 = X.chol_factor(), Y.chol_factor()
    K = R1 @ M @ R2.T
    U, s, Vh = np.linalg.svd(K)
    r = len(s)
    # B_K = conj(U) V^T attains the nuclear norm; pull it back through R1, R2
    BK = np.conj(U[:, :r]) @ np.conj(Vh[:r])
    B = R1.T @ BK @ R2
    atoms = []
    for k in range(r):
        if s[k] <= 0:
            continue
        atoms.append((float(s[k]), np.linalg.solve(R1, U[:, k]), np.linalg.solve(R2, Vh[k])))
    return float(s.sum()), B, atoms


def _initial_atoms(M, X, Y):
    n, m = M.shape
    In, Im = np.eye(n, dtype=complex), np.eye(m, dtype=complex)
    atoms = []
    for i in range(n):
        xi = In[i] / X.eval(In[i])
        for j in range(m):
            yj = Im[j] / Y.eval(Im[j])
            for ph in (1, 1j, -1, -1j):
                atoms.append((ph * xi, yj))
    U, s, Vh = np.linalg.svd(M)
    for k in range(len(s)):
        if s[k] <= 1e-15 * max(1.0, s[0]):
            continue
        x, y = U[:, k], Vh[k]
        x = x / X.eval(x)
        y = y / Y.eval(y)
        for ph in (1, 1j, -1, -1j):
            atoms.append((ph * x, y))
    for i in range(n):
        if np.any(M[i]):
            atoms.append((In[i] / X.eval(In[i]), M[i] / Y.eval(M[i])))
    for j in range(m):
        if np.any(M[:, j]):
            atoms.append((M[:, j] / X.eval(M[:, j]), Im[j] / Y.eval(Im[j])))
    return atoms


def _colgen(M, X, Y, restarts, seed, tol, max_iter, lower0=0.0, B0=None, per_round=16):
    n, m = M.shape
    atoms = _initial_atoms(M, X, Y)
    b = np.concatenate([M.real.ravel(), M.imag.ravel()])

    def column(x, y):
        a = np.kron(x, y)
        return np.concatenate([a.real, a.imag])

    cols = [column(x, y) for x, y in atoms]
    keys = [np.kron(x, y) for x, y in atoms]
    costs = [X.eval(x) * Y.eval(y) for x, y in atoms]
    lower, Bcert, upper, res = lower0, B0, np.inf, None
    converged = False
    beta_exact = False
    it = 0
    warm = []

    def add_columns(cands, Bref):
        added = 0
        for val, u, w in cands:
            if added >= per_round:
                break
            if np.real(u @ Bref @ w) <= 1.0 + tol:
                continue
            key = np.kron(u, w)
            if any(np.abs(key - keys[k]).max() < 1e-9 for k in range(len(atoms) - added, len(atoms))):
                continue
            atoms.append((u, w))
            keys.append(key)
            cols.append(column(u, w))
            costs.append(X.eval(u) * Y.eval(w))
            added += 1
        return added

    for it in range(max_iter):
        A = np.array(cols).T
        res = linprog(np.array(costs), A_eq=A, b_eq=b, bounds=(0, None), method="highs-ds",
                      options={"presolve": False})
        if res.status != 0:
            break
        upper = float(res.fun)
        if upper - lower <= tol * max(1.0, upper):
            converged = True
            break
        y = res.eqlin.marginals
        B = (y[: n * m] - 1j * y[n * m:]).reshape(n, m)
        # price at a point smoothed toward the best dual certificate so far
        for alpha in ((0.5, 0.0) if Bcert is not None else (0.0,)):
            Bs = B if alpha == 0.0 else alpha * Bcert + (1 - alpha) * B
            price = bilinear_max(Bs, X, Y, restarts=restarts, seed=seed + it, max_iter=200,
                                 init=warm[-4:])
            beta = price.value
            if beta > 0:
                lb = float(np.real(np.sum(Bs * M))) / beta
                if lb > lower:
                    lower, Bcert, beta_exact = lb, Bs / beta, price.exact
            cands = price.candidates or [(price.value, price.u, price.w)]
            warm = warm[-8:] + [c[2] for c in cands[:2]]
            if add_columns(cands, B):
                break
        else:
            converged = True
            break
        if upper - lower <= tol * max(1.0, upper):
            converged = True
            break
    if Bcert is not None and not beta_exact:
        # re-certify the dual form with a wider search for its bilinear norm
        chk = bilinear_max(Bcert, X, Y, restarts=8 * restarts, seed=seed + 7919)
        if chk.value > 1.0:
            lower = lower / chk.value
            Bcert = Bcert / chk.value
    atoms_out = []
    if res is not None and res.status == 0:
        for k in np.nonzero(res.x > 1e-13)[0]:
            x, y = atoms[k]
            atoms_out.append((float(res.x[k] * costs[k]), x / X.eval(x), y / Y.eval(y)))
    return upper, lower, Bcert, atoms_out, converged, it + 1, beta_exact


def projective_norm(z: TensorElement, restarts: int = 32, seed: int = DEFAULT_SEED,
                    tol: float = 1e-8, max_iter: int = 200) -> CrossNormResult:
    """gamma(z): certified interval from decompositions and dual bilinear forms."""
    M, X, Y = z.matrix, z.left, z.right
    if not np.any(M):
        return CrossNormResult(0.0, 0.0, 0.0, True, {}, 0, "zero", True)
    if X.is_l1_type or Y.is_l1_type:
        if X.is_l1_type:
            val, B, atoms = _l1_closed_form(M, X, Y)
        else:
            val, Bt, atoms_t = _l1_closed_form(M.T, Y, X)
            B = Bt.T
            atoms = [(c, x, y) for c, y, x in atoms_t]
        return CrossNormResult(val, val, val, True, {"dual_form": B, "decomposition": atoms},
                               0, "l1-closed-form", True)
    if X.is_inner_product and Y.is_inner_product:
        val, B, atoms = _nuclear_closed_form(M, X, Y)
        return CrossNormResult(val, val, val, True, {"dual_form": B, "decomposition": atoms},
                               0, "nuclear", True)
    # a product functional gives a lower bound whose normalization is exact
    lb0, B0 = _product_lower(M, X, Y)
    upper, lower, B, atoms, conv, iters, bexact = _colgen(M, X, Y, restarts, seed, tol, max_iter,
                                                          lb0, B0)
    lower = min(lower, upper)
    converged = upper - lower <= 1e-6 * max(1.0, upper)
    return CrossNormResult(upper, lower, upper, converged,
                           {"dual_form": B, "decomposition": atoms, "iterations": iters,
                            "pricing_exact": bexact},
                           restarts, "column-generation", False)


def _product_lower(M, X, Y):
    """Lower bound Re(B.M) with B = f g^T, |f^T x g^T y| <= X*(f) Y*(g)."""
    Xd, Yd = X.dual(), Y.dual()
    best, Bbest = 0.0, None
    U, s, Vh = np.linalg.svd(M)
    for k in range(min(2, len(s))):
        x, y = U[:, k], Vh[k]
        f, fx = Xd.maximizer(x)  # f in the dual ball norming x
        g, gy = Yd.maximizer(y)
        B = np.outer(f, g)
        val = np.sum(B * M)
        if abs(val) == 0:
            continue
        B = B * np.conj(val) / abs(val)
        nb = Xd.eval(f) * Yd.eval(g)
        lb = abs(val) / nb
        if lb > best:
            best, Bbest = lb, B / nb
    return best, Bbest


def hilbert_norm(z: TensorElement) -> float:
    """sqrt(vec(M)^H (G1 (x) G2) vec(M)) for inner-product factors."""
    X, Y = z.left, z.right
    if not (X.is_inner_product and Y.is_inner_product):
        raise NotImplementedError("the Hilbert cross-norm needs inner-product factors")
    R1, R2 = X.chol_factor(), Y.chol_factor()
    return float(np.linalg.norm(R1 @ z.matrix @ R2.T))


def hilbert_spec(X: NormSpec, Y: NormSpec) -> NormSpec:
    if not (X.is_inner_product and Y.is_inner_product):
        raise NotImplementedError("the Hilbert cross-norm needs inner-product factors")
    return gram_norm(np.kron(X.gram_matrix(), Y.gram_matrix()))


def crossnorm_spec(tag: str, X: NormSpec, Y: NormSpec) -> NormSpec:
    tag = canonical_tag(tag)
    if tag == "lambda":
        return NormSpec("injective", X.dim * Y.dim, left=X, right=Y)
    if tag == "gamma":
        return NormSpec("projective", X.dim * Y.dim, left=X, right=Y)
    return hilbert_spec(X, Y)


def crossnorm_value(tag: str, z: TensorElement, **kw) -> CrossNormResult:
    tag = canonical_tag(tag)
    if tag == "lambda":
        return injective_norm(z, **kw)
    if tag == "gamma":
        return projective_norm(z, **kw)
    v = hilbert_norm(z)
    return CrossNormResult(v, v, v, True, {}, 0, "gram", True)


def crossnorm_ball_maximizer(spec: NormSpec, C):
    """Linear maximization over the unit ball of an injective/projective norm."""
    X, Y = spec.left, spec.right
    if spec.kind == "projective":
        r = bilinear_max(C, X, Y, restarts=16)
        return np.kron(r.u, r.w), r.value
    # the dual of lambda(X, Y) is gamma(X*, Y*); its dual form is the maximizer
    res = projective_norm(TensorElement(C, X.dual(), Y.dual()))
    B = res.certificate.get("dual_form")
    if B is None:
        return np.zeros(spec.dim, dtype=complex), 0.0
    u = np.asarray(B).reshape(-1)
    return u, float(np.real(np.sum(u * C.reshape(-1))))


# compatibility ---------------------------------------------------------------
@dataclass
class SandwichReport:
    passed: bool
    lam_lower: float
    candidate: float
    gam_upper: float
    tol: float
    violation: Optional[str] = None
    certificates: dict = field(default_factory=dict, repr=False)


def check_compatibility_sandwich(z: TensorElement, candidate: Callable, tol: float = 1e-6,
                                 seed: int = DEFAULT_SEED) -> SandwichReport:
    """Check lambda(z) <= candidate(z) <= gamma(z) with certified bounds."""
    lam = injective_norm(z, seed=seed)
    gam = projective_norm(z, seed=seed)
    c = float(candidate(z))
    viol = None
    if c < lam.lower - tol:
        viol = "below-injective"
    elif c > gam.upper + tol:
        viol = "above-projective"
    certs = {"injective": lam.certificate, "projective": gam.certificate}
    return SandwichReport(viol is None, lam.lower, c, gam.upper, tol, viol, certs)


# tensor operators ------------------------------------------------------------
def tensor_operator(T1: OperatorMatrix, T2: OperatorMatrix, crossnorm: str) -> OperatorMatrix:
    """T1 (x) T2 on row-major tensor coordinates, with the cross-norm on both sides."""
    K = np.kron(T1.matrix, T2.matrix)
    dom = crossnorm_spec(crossnorm, T1.domain, T2.domain)
    cod = crossnorm_spec(crossnorm, T1.codomain, T2.codomain)
    return OperatorMatrix(K, dom, cod)


@dataclass
class UniformityReport:
    crossnorm: str
    norm_T1: float
    norm_T2: float
    product: float
    tensor_norm: float
    lower: float
    search_max: float
    passed: bool
    inconclusive: bool
    detail: str = ""


def _cheap(spec: NormSpec) -> bool:
    """True when linear maximization over the ball has a closed form."""
    if spec.kind != "injective":
        return True
    Xd, Yd = spec.left.dual(), spec.right.dual()
    return Xd.is_l1_type or Yd.is_l1_type or (Xd.is_inner_product and Yd.is_inner_product)


def check_uniformity(T1: OperatorMatrix, T2: OperatorMatrix, crossnorm: str, tol: float = 1e-5,
                     samples: int = 20, seed: int = DEFAULT_SEED) -> UniformityReport:
    """Compare ||T1 (x) T2|| for the cross-norm with ||T1|| ||T2||."""
    tag = canonical_tag(crossnorm)
    r1, r2 = operator_norm(T1, seed=seed), operator_norm(T2, seed=seed)
    prod = r1.value * r2.value
    X1, X2 = T1.domain, T2.domain
    Y1, Y2 = T1.codomain, T2.codomain
    def cn(M, A, B):
        return crossnorm_value(tag, TensorElement(M, A, B), seed=seed).value

    # image of the norming elementary tensor
    lower = 0.0
    if r1.argmax is not None and r2.argmax is not None:
        x, y = r1.argmax, r2.argmax
        den = cn(np.outer(x, y), X1, X2)
        if den > 0:
            lower = cn(np.outer(T1.matrix @ x, T2.matrix @ y), Y1, Y2) / den
    rng = np.random.default_rng(seed)
    search = lower
    n, m = X1.dim, X2.dim
    for _ in range(samples):
        Z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        den = cn(Z, X1, X2)
        if den > 0:
            search = max(search, cn(T1.matrix @ Z @ T2.matrix.T, Y1, Y2) / den)
    detail = ""
    if tag == "h":
        op = tensor_operator(T1, T2, "h")
        direct = operator_norm(op, seed=seed)
        tn = direct.value
        search = max(search, tn)
        detail = "gram singular value"
    else:
        op = tensor_operator(T1, T2, tag)
        tn = lower
        if _cheap(op.domain) and _cheap(op.codomain.dual()):
            direct = operator_norm(op, restarts=4, seed=seed)
            search = max(search, direct.value)
            tn = max(tn, direct.value)
            detail = "ball-maximizer ascent"
        else:
            detail = "certificate and sampling"
    inconclusive = not (r1.converged and r2.converged)
    passed = abs(tn - prod) <= tol * max(1.0, prod) and search <= prod + tol * max(1.0, prod)
    return UniformityReport(tag, r1.value, r2.value, prod, tn, lower, search, bool(passed),
                            inconclusive, detail)


# brute force -----------------------------------------------------------------
def _batch_eval(N: NormSpec, V):
    """Evaluate a norm on the rows of V."""
    V = np.asarray(V, dtype=complex)
    if N.kind in ("p", "weighted"):
        p, s = N.lp_scale()
        A = np.abs(V * s)
        if np.isinf(p):
            return A.max(axis=1)
        return (A ** p).sum(axis=1) ** (1.0 / p)
    if N.kind == "gram":
        R = N.chol_factor()
        return np.linalg.norm(V @ R.T, axis=1)
    return np.array([N.eval(v) for v in V])


def _directions(params, k):
    """Map (theta_1..theta_{k-1}, phi_2..phi_k) to unit vectors in C^k."""
    P = np.atleast_2d(params)
    t = P[:, : k - 1]
    ph = P[:, k - 1:]
    r = np.ones((P.shape[0], k))
    for i in range(k - 1):
        r[:, i] *= np.cos(t[:, i])
        r[:, i + 1:] *= np.sin(t[:, i])[:, None]
    phases = np.ones((P.shape[0], k), dtype=complex)
    phases[:, 1:] = np.exp(1j * ph)
    return r * phases


def _phase_only(params, k, scale):
    P = np.atleast_2d(params)
    phases = np.ones((P.shape[0], k), dtype=complex)
    phases[:, 1:] = np.exp(1j * P)
    return phases / scale


def _grid_search(objective, lo, hi, density, cap=200_000, levels=12, keep=8, local=5):
    D = len(lo)
    if D == 0:
        return float(objective(np.zeros((1, 0)))[0])
    per = max(3, min(int(density), int(np.floor(cap ** (1.0 / D)))))
    axes = [np.linspace(l, h, per) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, D)
    vals = objective(grid)
    best = float(vals.max())
    step = (np.asarray(hi) - np.asarray(lo)) / (per - 1)
    order = np.argsort(-vals)[:keep]
    centers = grid[order]
    offs = np.stack(np.meshgrid(*[np.linspace(-1, 1, local)] * D, indexing="ij"), axis=-1).reshape(-1, D)
    for _ in range(levels):
        pts = (centers[:, None, :] + offs[None, :, :] * step).reshape(-1, D)
        pts = np.clip(pts, lo, hi)
        v = objective(pts)
        best = max(best, float(v.max()))
        order = np.argsort(-v)[:keep]
        centers = pts[order]
        step = step / 2.0
    return best


def injective_norm_bruteforce(z: TensorElement, grid_density: int = 720) -> float:
    """Dense-grid evaluation of lambda(z); test oracle for small tensors."""
    M = z.matrix
    n, m = M.shape
    if n * m > 9:
        raise ValueError("brute force is limited to n*m <= 9")
    X, Y = z.left, z.right
    Xd, Yd = X.dual(), Y.dual()
    # lambda = sup over the dual sphere of one side of the other norm
    if Xd.is_l1_type or (not Yd.is_l1_type and n <= m):
        D, other, A = Xd, Y, M.T
    else:
        D, other, A = Yd, X, M
    k = D.dim
    if D.is_l1_type:
        _, s = D.lp_scale()
        F = np.diag(1.0 / s).astype(complex)
        return float(_batch_eval(other, F @ A.T).max())
    if D.is_linf_type:
        _, s = D.lp_scale()

        def obj(P):
            F = _phase_only(P, k, s)
            return _batch_eval(other, F @ A.T)
        return _grid_search(obj, [0.0] * (k - 1), [2 * np.pi] * (k - 1), grid_density)

    def obj(P):
        F = _directions(P, k)
        F = F / _batch_eval(D, F)[:, None]
        return _batch_eval(other, F @ A.T)
    lo = [0.0] * (k - 1) + [0.0] * (k - 1)
    hi = [np.pi / 2] * (k - 1) + [2 * np.pi] * (k - 1)
    return _grid_search(obj, lo, hi, grid_density)


def sphere_bruteforce_max(objective, N: NormSpec, grid_density: int = 200) -> float:
    """sup of a convex function of v over the unit sphere of N (n <= 3)."""
    k = N.dim
    if N.is_l1_type:
        _, s = N.lp_scale()
        return float(objective(np.diag(1.0 / s).astype(complex)).max())
    if N.is_linf_type:
        _, s = N.lp_scale()
        return _grid_search(lambda P: objective(_phase_only(P, k, s)),
                            [0.0] * (k - 1), [2 * np.pi] * (k - 1), grid_density)

    def obj(P):
        F = _directions(P, k)
        return objective(F / _batch_eval(N, F)[:, None])
    lo = [0.0] * (2 * k - 2)
    hi = [np.pi / 2] * (k - 1) + [2 * np.pi] * (k - 1)
    return _grid_search(obj, lo, hi, grid_density)
