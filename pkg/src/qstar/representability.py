"""Representable functionals, invariant forms, GNS, positivity and semisimplicity.

Conventions: a functional is omega(a) = sum coeffs_i a_i (bilinear pairing);
a form is Omega(a, b) = b^H S a; the Gram matrix of omega is
G[i, j] = omega(e_i* e_j), so that phi_omega(x, y) = omega(y* x) = y^H G x.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from .algebra import QuasiPair, unitize
from .bilinear import DEFAULT_SEED
from .norms import NormSpec
from .sdp import herm_basis, herm_coords, maximal_psd_point

__all__ = [
    "FunctionalModel",
    "FormModel",
    "GNSData",
    "NotRepresentableError",
    "gram_of_functional",
    "check_representable",
    "gns",
    "positive_cone_membership",
    "sample_positive_cone",
    "sufficiency_check",
    "semisimple_check",
    "semisimple_bruteforce",
    "invariance_residual",
    "quadratic_form_max",
    "elementary_quadratic_max",
    "fully_representable_check",
    "condition_P_check",
    "closure_of_form",
    "compose_functional",
    "coordinate_family",
    "representable_family",
]


class NotRepresentableError(ValueError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


@dataclass(frozen=True, eq=False)
class FunctionalModel:
    pair: QuasiPair
    coeffs: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.size != self.pair.dim:
            raise ValueError("functional has the wrong dimension")
        if not np.all(np.isfinite(c)):
            raise ValueError("functional must be finite on the basis")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, a):
        return complex(self.coeffs @ np.asarray(a, dtype=complex))

    def to_json(self):
        return {"coeffs": np.stack([self.coeffs.real, self.coeffs.imag], -1).tolist(),
                "provenance": self.provenance, "pair": self.pair.label}


@dataclass(frozen=True, eq=False)
class FormModel:
    pair: QuasiPair
    matrix: np.ndarray
    bound: float = np.nan
    provenance: str = ""
    bound_exact: bool = False

    def __post_init__(self):
        S = np.asarray(self.matrix, dtype=complex)
        if S.shape != (self.pair.dim, self.pair.dim):
            raise ValueError("form has the wrong shape")
        object.__setattr__(self, "matrix", S)

    def __call__(self, a, b):
        return complex(np.conj(np.asarray(b, dtype=complex)) @ self.matrix @ np.asarray(a, dtype=complex))

    @property
    def hermitian_residual(self):
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def to_json(self):
        S = self.matrix
        return {"matrix": np.stack([S.real, S.imag], -1).tolist(), "bound": self.bound,
                "provenance": self.provenance, "pair": self.pair.label}


def gram_of_functional(omega: FunctionalModel) -> np.ndarray:
    """G[i, j] = omega(e_i* e_j)."""
    T = omega.pair.algebra.star_products()
    return np.einsum("ijk,k->ij", T, omega.coeffs)


def compose_functional(omega: FunctionalModel, x) -> FunctionalModel:
    """omega_x(a) = omega(x* a x)."""
    alg = omega.pair.algebra
    x = np.asarray(x, dtype=complex)
    M = alg.left_matrix(alg.star(x)) @ alg.right_matrix(x)
    return FunctionalModel(omega.pair, M.T @ omega.coeffs, f"{omega.provenance}|x*ax")


def coordinate_family(pair: QuasiPair) -> List[FunctionalModel]:
    n = pair.dim
    return [FunctionalModel(pair, np.eye(n)[i], f"coordinate[{i}]") for i in range(n)]


# representability ------------------------------------------------------------
@dataclass
class RepresentabilityReport:
    representable: bool
    l1: bool
    l2: bool
    l3: bool
    min_eigenvalue: float
    l2_residual: float
    range_residual: float
    gamma: np.ndarray
    certificates: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return "representable" if self.representable else "not-representable"


def _triple_values(omega: FunctionalModel):
    """W[x, a, y] = omega(e_x* e_a e_y)."""
    alg = omega.pair.algebra
    T = alg.star_products()
    U = np.einsum("xaq,qyk->xayk", T, alg.structure)
    return np.einsum("xayk,k->xay", U, omega.coeffs)


def check_representable(omega: FunctionalModel, tol: float = 1e-10) -> RepresentabilityReport:
    alg = omega.pair.algebra
    n = alg.dim
    G = gram_of_functional(omega)
    scale = max(1.0, np.abs(omega.coeffs).max())
    herm = float(np.abs(G - G.conj().T).max())
    Gh = (G + G.conj().T) / 2
    w, V = np.linalg.eigh(Gh)
    certs = {}
    l1 = bool(w[0] >= -tol * scale and herm <= tol * scale)
    if w[0] < -tol * scale:
        certs["negative_eigenvector"] = V[:, 0]
        certs["negative_value"] = float(w[0])
    if herm > tol * scale:
        certs["gram_not_hermitian"] = herm
    # (L.2): omega(y* a* x) = conj(omega(x* a y)) on basis triples
    W = _triple_values(omega)
    lhs = np.einsum("ra,yrx->xay", alg.involution, W)
    l2_res = float(np.abs(lhs - np.conj(W)).max())
    l2 = l2_res <= tol * scale
    if not l2:
        idx = np.unravel_index(np.argmax(np.abs(lhs - np.conj(W))), W.shape)
        certs["l2_triple"] = tuple(int(i) for i in idx)
    # (L.3): conj(v_a) must lie in the range of G, (v_a)_j = omega(a* e_j)
    T = alg.star_products()
    Vmat = np.einsum("ajk,k->aj", T, omega.coeffs)
    cut = max(tol * scale, 1e-12 * max(w[-1], 0.0))
    pos = w > cut
    Up, wp = V[:, pos], w[pos]
    gam = np.zeros(n)
    rng_res = 0.0
    for a in range(n):
        u = np.conj(Vmat[a])
        proj = Up @ (Up.conj().T @ u)
        r = float(np.linalg.norm(u - proj))
        if r > rng_res:
            rng_res = r
            if r > tol * scale:
                # kernel vector z of G with v_a^T z != 0
                K = V[:, ~pos]
                z = K @ (K.conj().T @ u)
                certs["range_violation"] = {"a": a, "residual": r, "x": z / np.linalg.norm(z)}
        c = Up.conj().T @ u
        gam[a] = float(np.sqrt(np.sum(np.abs(c) ** 2 / wp))) if wp.size else 0.0
    l3 = rng_res <= max(tol * scale, 1e-9 * scale)
    return RepresentabilityReport(bool(l1 and l2 and l3), l1, bool(l2), bool(l3), float(w[0]),
                                  l2_res, rng_res, gam, certs)


# GNS -------------------------------------------------------------------------
@dataclass
class GNSData:
    pair: QuasiPair
    omega: FunctionalModel
    hilbert_dim: int
    embedding: np.ndarray          # kappa: r x n
    rep: np.ndarray                # pi(e_i): n x r x r
    cyclic_vector: np.ndarray
    spectrum_cutoff: float
    residuals: dict = field(default_factory=dict)
    cutoff_sensitivity: dict = field(default_factory=dict)
    unitized: bool = False

    def pi(self, a):
        return np.einsum("i,iab->ab", np.asarray(a, dtype=complex), self.rep)

    def embed(self, x):
        return self.embedding @ np.asarray(x, dtype=complex)

    def form(self, a, b):
        """Omega^omega(a, b) = <pi(a) xi, pi(b) xi>."""
        xi = self.cyclic_vector
        return complex(np.vdot(self.pi(b) @ xi, self.pi(a) @ xi))


def _extend_to_unit(pair: QuasiPair, omega: FunctionalModel):
    """Unitize and choose omega(e) minimal with a PSD extended Gram (bisection)."""
    up = unitize(pair)

    def ok(t):
        Ge = gram_of_functional(FunctionalModel(up, np.append(omega.coeffs, t)))
        return np.linalg.eigvalsh((Ge + Ge.conj().T) / 2)[0] >= -1e-12 * max(1.0, t)

    lo, hi = 0.0, 1.0
    while not ok(hi):
        hi *= 2.0
        if hi > 1e12:
            raise NotRepresentableError("no PSD extension to the unitization")
    for _ in range(100):
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return up, FunctionalModel(up, np.append(omega.coeffs, hi), omega.provenance + "|unitized")


def gns(omega: FunctionalModel, cutoff: float = 1e-10, tol: float = 1e-10) -> GNSData:
    """GNS construction for a representable functional."""
    pair = omega.pair
    unitized = False
    if not np.any(omega.coeffs):
        raise NotRepresentableError("zero functional: the GNS space is trivial")
    if not pair.algebra.has_unit:
        pair, omega = _extend_to_unit(pair, omega)
        unitized = True
    rep = check_representable(omega, tol=max(tol, 1e-9))
    if not rep.representable:
        raise NotRepresentableError("functional is not representable", rep)
    alg = pair.algebra
    n = alg.dim
    G = gram_of_functional(omega)
    G = (G + G.conj().T) / 2
    w, U = np.linalg.eigh(G)
    if w[-1] <= 0:
        raise NotRepresentableError("zero Gram matrix: the GNS space is trivial", rep)
    keep = w > cutoff * w[-1]
    r = int(keep.sum())
    kappa = (np.sqrt(w[keep])[:, None]) * U[:, keep].conj().T
    kpinv = U[:, keep] / np.sqrt(w[keep])[None, :]
    L = np.einsum("ijk->ikj", alg.structure)  # L[i] = matrix of a -> e_i a
    P = np.einsum("ab,ibc,cd->iad", kappa, L, kpinv)
    xi = kappa @ alg.unit
    sens = {}
    for c in (1e-6, 1e-8, 1e-12, 1e-14):
        sens[f"{c:g}"] = int((w > c * w[-1]).sum())
    data = GNSData(pair, omega, r, kappa, P, xi, cutoff, {}, sens, unitized)
    data.residuals = gns_residuals(data)
    return data


def gns_residuals(data: GNSData) -> dict:
    alg = data.pair.algebra
    n = alg.dim
    P, xi = data.rep, data.cyclic_vector
    I = np.eye(n)
    repro = max(abs(data.omega(I[i]) - np.vdot(xi, P[i] @ xi)) for i in range(n))
    star = 0.0
    for i in range(n):
        Ps = np.einsum("r,rab->ab", alg.involution[:, i], P)
        star = max(star, float(np.linalg.norm(Ps - P[i].conj().T)))
    mult = 0.0
    for i in range(n):
        for j in range(n):
            Pij = np.einsum("k,kab->ab", alg.structure[i, j], P)
            mult = max(mult, float(np.abs(Pij - P[i] @ P[j]).max()))
    form = 0.0
    for i in range(n):
        for j in range(n):
            # Omega(e_i, e_j) against omega(e_j* e_i)
            val = alg.mul(alg.star(I[j]), I[i])
            form = max(form, abs(data.form(I[i], I[j]) - data.omega(val)))
    unit_form = 0.0
    if alg.unit is not None:
        unit_form = max(abs(data.form(I[i], alg.unit) - data.omega(I[i])) for i in range(n))
    vecs = np.array([P[i] @ xi for i in range(n)]).T
    rank = int(np.linalg.matrix_rank(vecs, tol=1e-8 * max(1.0, np.abs(vecs).max()))) if vecs.size else 0
    # the null space of the Gram form must be a left ideal for pi to be well defined
    kappa = data.embedding
    proj = np.eye(n) - np.linalg.pinv(kappa) @ kappa
    L = np.einsum("ijk->ikj", alg.structure)
    ideal = max(float(np.abs(kappa @ L[i] @ proj).max()) for i in range(n))
    return {"reproduction": float(repro), "star": star, "multiplicative": mult,
            "form": float(form), "unit_form": float(unit_form), "cyclic_rank": rank,
            "left_ideal": ideal}


# positivity ------------------------------------------------------------------
@dataclass
class ConeResult:
    verdict: str                 # member | non-member | unknown
    closure_only: bool = False
    P: Optional[np.ndarray] = None
    factors: Optional[np.ndarray] = None
    separating: Optional[np.ndarray] = None
    residual: float = np.nan
    separation_value: float = np.nan
    detail: str = ""


def _solve(prob, solvers=("CLARABEL", "SCS")):
    import cvxpy as cp
    for solver in solvers:
        if solver in cp.installed_solvers():
            try:
                with warnings.catch_warnings():
                    # cvxpy emits this for its own 1x1 complex variables
                    warnings.filterwarnings("ignore", message="Initializing a Constant with a nested list")
                    prob.solve(solver=solver)
                if prob.status in ("optimal", "optimal_inaccurate", "infeasible",
                                   "infeasible_inaccurate", "unbounded"):
                    return prob.status
            except Exception:  # solver failure, try the next one
                continue
    return "solver_error"


def positive_cone_membership(pair: QuasiPair, a, tol: float = 1e-7) -> ConeResult:
    """Decide a in A0+ (sums of x* x) or its closure, with certificates."""
    import cvxpy as cp

    alg = pair.algebra
    n = alg.dim
    a = np.asarray(a, dtype=complex)
    na = max(np.linalg.norm(a), 1e-300)
    if np.linalg.norm(a) == 0:
        return ConeResult("member", False, np.zeros((n, n)), np.zeros((0, n)), residual=0.0,
                          detail="empty sum")
    herm = np.linalg.norm(alg.star(a) - a) / na
    T = alg.star_products()
    if herm > 1e-9:
        return ConeResult("non-member", residual=float(herm), detail="element is not self-adjoint")
    # primal: sum_ij P_ij e_i* e_j = a with P PSD
    P = cp.Variable((n, n), hermitian=True)
    expr = [cp.sum(cp.multiply(P, T[:, :, k])) for k in range(n)]
    cons = [P >> 0] + [expr[k] == a[k] for k in range(n)]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(P))), cons)
    # boundary elements make the primal weakly infeasible; the dual decides those
    st = _solve(prob, ("CLARABEL",))
    if st in ("optimal", "optimal_inaccurate") and P.value is not None:
        Pv = (P.value + P.value.conj().T) / 2
        w, V = np.linalg.eigh(Pv)
        w = np.clip(w, 0, None)
        Pv = (V * w) @ V.conj().T
        recon = np.einsum("ij,ijk->k", Pv, T)
        res = float(np.linalg.norm(recon - a) / na)
        if res <= tol:
            C = (np.sqrt(w)[:, None] * V.conj().T)
            C = C[w > 1e-12 * max(w.max(), 1e-300)]
            return ConeResult("member", False, Pv, C, residual=res)
    # dual: minimize Re omega(a) over functionals with PSD Gram matrices
    c = cp.Variable(n, complex=True)
    H = cp.Variable((n, n), hermitian=True)
    gram = [[cp.sum(cp.multiply(T[i, j], c)) for j in range(n)] for i in range(n)]
    cons = [H >> 0, cp.norm(c, 2) <= 1]
    cons += [H[i, j] == gram[i][j] for i in range(n) for j in range(n)]
    prob2 = cp.Problem(cp.Minimize(cp.real(a @ c)), cons)
    st2 = _solve(prob2)
    if st2 not in ("optimal", "optimal_inaccurate") or c.value is None:
        return ConeResult("unknown", detail=f"solver status {st}/{st2}")
    val = float(np.real(a @ c.value)) / na
    G = np.einsum("ijk,k->ij", T, c.value)
    lam = float(np.linalg.eigvalsh((G + G.conj().T) / 2)[0])
    # a Gram violation mu lets boundary points look separated by about sqrt(mu)
    slack = tol + 10.0 * np.sqrt(max(0.0, -lam))
    if val < -slack:
        return ConeResult("non-member", separating=c.value, separation_value=val,
                          detail=f"separating functional, Gram min eigenvalue {lam:.3g}")
    return ConeResult("member", True, separation_value=val,
                      detail="no separating functional: element of the closed cone")


def sample_positive_cone(pair: QuasiPair, k: int, rng, terms: int = 3, max_decades: float = 6.0):
    """Multi-scale sums of squares; small coordinates reach the cone's boundary."""
    alg = pair.algebra
    n = alg.dim
    out = []
    for _ in range(k):
        a = np.zeros(n, dtype=complex)
        for _ in range(terms):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x *= 10.0 ** (max_decades * rng.uniform(-1.0, 1.0, n) * (rng.random() < 0.7))
            a += alg.mul(alg.star(x), x)
        out.append(a)
    I = np.eye(n)
    for i in range(n):
        out.append(alg.mul(alg.star(I[i]), I[i]))
    # x = d e_i + c e_j / d with small d approaches boundary points of the closure
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in (1.0, -1.0, 1j, -1j):
                for d in (1e-3, 1e-6):
                    x = d * I[i] + (c / d) * I[j]
                    out.append(alg.mul(alg.star(x), x))
    return [a for a in out if np.linalg.norm(a) > 0]


@dataclass
class SufficiencyReport:
    sufficient: bool
    worst_margin: float
    witness: Optional[np.ndarray]
    samples: int
    family_size: int


def sufficiency_check(pair: QuasiPair, family: Sequence[FunctionalModel], samples: int = 200,
                      tol: float = 1e-8, seed: int = DEFAULT_SEED) -> SufficiencyReport:
    """For sampled nonzero a in A+, require some omega in the family with omega(a) > tol."""
    rng = np.random.default_rng(seed)
    cone = sample_positive_cone(pair, samples, rng)
    N = pair.normA
    C = np.array([f.coeffs for f in family]) if family else np.zeros((0, pair.dim))
    worst, wit = np.inf, None
    for a in cone:
        a = a / N.eval(a)
        m = float(np.max(np.real(C @ a))) if len(C) else -np.inf
        if m < worst:
            worst, wit = m, a
    return SufficiencyReport(bool(worst > tol), float(worst), wit, len(cone), len(C))


# invariant forms and semisimplicity -------------------------------------------
def _invariance_operator(pair: QuasiPair):
    """Real matrix A with A @ coords(S) = 0 iff Omega_S(ax, y) = Omega_S(x, a* y)."""
    alg = pair.algebra
    n = alg.dim
    Hb = herm_basis(n)
    C = alg.structure
    T = alg.star_products()
    lhs = np.einsum("rkp,ijp->rijk", Hb, C)
    rhs = np.einsum("ikq,rqj->rijk", np.conj(T), Hb)
    R = (lhs - rhs).reshape(len(Hb), -1)
    A = np.concatenate([R.real, R.imag], axis=1).T
    return A, Hb


def invariance_residual(form: FormModel) -> float:
    alg = form.pair.algebra
    S = form.matrix
    lhs = np.einsum("kp,ijp->ijk", S, alg.structure)
    rhs = np.einsum("ikq,qj->ijk", np.conj(alg.star_products()), S)
    return float(np.abs(lhs - rhs).max())


def _invariant_subspace(A, Hb, Q, rtol=1e-10):
    """Hermitian S in the invariant subspace with range(S) inside range(Q)."""
    n = Hb.shape[1]
    r = Q.shape[1]
    Hr = herm_basis(r)
    # S = Q T Q^H for T in the r x r Hermitian basis
    lifted = np.einsum("ai,kij,bj->kab", Q, Hr, Q.conj())
    L = np.array([herm_coords(S, Hb) for S in lifted]).T
    M = A @ L
    if M.size == 0:
        return lifted
    s = np.linalg.svd(M, compute_uv=False)
    tol = rtol * max(1.0, s.max() if s.size else 0.0)
    N = null_space(M, rcond=tol / max(s.max(), 1e-300)) if s.size else np.eye(L.shape[1])
    if N.shape[1] == 0:
        return np.zeros((0, n, n))
    out = np.einsum("kj,kab->jab", N, lifted)
    # orthonormalize in the Frobenius inner product
    flat = np.array([herm_coords(S, Hb) for S in out]).T
    Qf, _ = np.linalg.qr(flat)
    return np.einsum("rj,rab->jab", Qf, Hb)


def quadratic_form_max(S, norm: NormSpec, cuts: int = 256, seed: int = DEFAULT_SEED):
    """sup a^H S a over the unit ball of norm (S PSD); returns (value, exact)."""
    S = (np.asarray(S) + np.asarray(S).conj().T) / 2
    if not np.any(S):
        return 0.0, True
    if norm.is_inner_product:
        Ri = np.linalg.inv(norm.chol_factor())
        K = Ri.conj().T @ S @ Ri
        return float(np.linalg.eigvalsh((K + K.conj().T) / 2)[-1]), True
    if norm.kind in ("projective", "injective"):
        val, exact = elementary_quadratic_max(S, norm.left, norm.right, seed=seed)
        # over the projective ball the sup is attained at elementary tensors
        return val, exact and norm.kind == "projective"
    rng = np.random.default_rng(seed)
    n = S.shape[0]
    _, V = np.linalg.eigh(S)
    starts = [V[:, -1]] + list(np.eye(n, dtype=complex))
    starts += list(rng.standard_normal((cuts, n)) + 1j * rng.standard_normal((cuts, n)))
    starts = [a / norm.eval(a) for a in starts]
    vals = [float(np.real(np.vdot(a, S @ a))) for a in starts]
    best = max(vals)
    # convex maximization: linearize and ascend from the best cut points
    for k in np.argsort(vals)[::-1][:16]:
        a = starts[k]
        cur = vals[k]
        for _ in range(200):
            u, _ = norm.maximizer(np.conj(S @ a))
            val = float(np.real(np.vdot(u, S @ u)))
            if val <= cur + 1e-15 * max(1.0, val):
                break
            a, cur = u, val
        best = max(best, cur)
    return best, False


def elementary_quadratic_max(S, X: NormSpec, Y: NormSpec, starts: int = 8, seed: int = DEFAULT_SEED,
                             max_iter: int = 100):
    """sup (x (x) y)^H S (x (x) y) over ||x||_X <= 1, ||y||_Y <= 1 by alternating maximization.

    Returns (value, exact); exact only when one factor is one-dimensional and the
    other has an inner-product norm.
    """
    n, m = X.dim, Y.dim
    S = (np.asarray(S) + np.asarray(S).conj().T) / 2
    if not np.any(S):
        return 0.0, True
    S4 = S.reshape(n, m, n, m)
    rng = np.random.default_rng(seed)
    _, V = np.linalg.eigh(S)
    inits = [np.linalg.svd(V[:, -k].reshape(n, m))[0][:, 0] for k in range(1, min(3, n * m) + 1)]
    inits += list(np.eye(n, dtype=complex))
    inits += list(rng.standard_normal((starts, n)) + 1j * rng.standard_normal((starts, n)))
    best = 0.0
    for x in inits:
        x = x / X.eval(x)
        cur = -np.inf
        for _ in range(max_iter):
            Ky = np.einsum("i,ijkl,k->jl", np.conj(x), S4, x)
            y = _argmax_quadratic(Ky, Y, seed)
            Kx = np.einsum("j,ijkl,l->ik", np.conj(y), S4, y)
            x = _argmax_quadratic(Kx, X, seed)
            val = float(np.real(np.vdot(x, Kx @ x)))
            if val <= cur + 1e-14 * max(1.0, val):
                cur = max(cur, val)
                break
            cur = val
        best = max(best, cur)
    exact = (n == 1 and Y.is_inner_product) or (m == 1 and X.is_inner_product)
    return float(best), bool(exact)


def _argmax_quadratic(K, norm: NormSpec, seed: int):
    """A unit-ball point attaining (or nearly attaining) sup a^H K a."""
    K = (K + K.conj().T) / 2
    if norm.is_inner_product:
        R = norm.chol_factor()
        Ri = np.linalg.inv(R)
        _, V = np.linalg.eigh(Ri.conj().T @ K @ Ri)
        a = Ri @ V[:, -1]
        return a / norm.eval(a)
    _, V = np.linalg.eigh(K)
    a = V[:, -1] / norm.eval(V[:, -1])
    cur = float(np.real(np.vdot(a, K @ a)))
    for _ in range(200):
        u, _ = norm.maximizer(np.conj(K @ a))
        val = float(np.real(np.vdot(u, K @ u)))
        if val <= cur + 1e-15 * max(1.0, val):
            break
        a, cur = u, val
    return a


@dataclass
class SemisimpleReport:
    verdict: str                       # semisimple | not-semisimple | unknown
    interior_form: Optional[FormModel]
    kernel: np.ndarray
    min_eigenvalue: float
    invariant_dim: int
    t_star: float
    rounds: list = field(default_factory=list)
    bound_exact: bool = False

    @property
    def semisimple(self):
        return self.verdict == "semisimple"


def semisimple_check(pair: QuasiPair, tol: float = 1e-8, cuts: int = 256,
                     seed: int = DEFAULT_SEED) -> SemisimpleReport:
    """Find a maximal-support invariant PSD form; semisimple iff it is definite."""
    n = pair.dim
    A, Hb = _invariance_operator(pair)
    full = _invariant_subspace(A, Hb, np.eye(n, dtype=complex))
    fr = maximal_psd_point(n, lambda Q: _invariant_subspace(A, Hb, Q))
    S = fr.S
    bound, exact = quadratic_form_max(S, pair.normA, cuts=cuts, seed=seed) if np.any(S) else (0.0, True)
    if bound > 0:
        S = S / bound
    form = FormModel(pair, S, 1.0 if bound > 0 else 0.0, "semisimple_check:interior", exact)
    lam = float(np.linalg.eigvalsh((S + S.conj().T) / 2)[0]) if n else 0.0
    if not fr.converged:
        verdict = "unknown"
    elif fr.kernel.shape[1] == 0 and lam > tol:
        verdict = "semisimple"
    else:
        verdict = "not-semisimple"
    return SemisimpleReport(verdict, form, fr.kernel, lam, len(full), fr.t_star, fr.rounds, exact)


def _rref(M, tol=1e-10):
    M = np.array(M, dtype=float)
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = r + int(np.argmax(np.abs(M[r:, c])))
        if abs(M[p, c]) <= tol:
            continue
        M[[r, p]] = M[[p, r]]
        M[r] /= M[r, c]
        for i in range(rows):
            if i != r:
                M[i] -= M[i, c] * M[r]
        r += 1
    return M[:r]


def semisimple_bruteforce(pair: QuasiPair, density: int = 9, cap: int = 200_000,
                          psd_tol: float = 1e-10):
    """Joint kernel of PSD invariant forms found by dense sampling (n <= 3)."""
    n = pair.dim
    if n > 3:
        raise ValueError("brute force sampler is limited to n <= 3")
    A, Hb = _invariance_operator(pair)
    N = null_space(A, rcond=1e-10)
    d = N.shape[1]
    if d == 0:
        return "not-semisimple", np.eye(n, dtype=complex), 0
    Bv = _rref(N.T)
    mats = np.einsum("kr,rab->kab", Bv, Hb)
    per = max(3, min(density, int(np.floor(cap ** (1.0 / d)))))
    ax = np.linspace(-1, 1, per)
    grid = np.stack(np.meshgrid(*[ax] * d, indexing="ij"), -1).reshape(-1, d)
    grid = grid[np.abs(grid).max(axis=1) >= 1 - 1e-12]  # cube surface
    acc = np.zeros((n, n), dtype=complex)
    found = 0
    for chunk in np.array_split(grid, max(1, len(grid) // 20000)):
        Ss = np.einsum("gk,kab->gab", chunk, mats)
        w = np.linalg.eigvalsh(Ss)
        ok = w[:, 0] >= -psd_tol * np.maximum(1.0, np.abs(w).max(axis=1))
        if ok.any():
            sel = Ss[ok]
            nrm = np.linalg.norm(sel, axis=(1, 2))
            acc += (sel / nrm[:, None, None]).sum(axis=0)
            found += int(ok.sum())
    w, V = np.linalg.eigh((acc + acc.conj().T) / 2)
    K = V[:, w <= 1e-8 * max(1.0, w.max() if w.size else 0.0)]
    verdict = "semisimple" if K.shape[1] == 0 else "not-semisimple"
    return verdict, K, found


# full representability and (P) ------------------------------------------------
@dataclass
class FullRepReport:
    fully_representable: bool
    sufficiency: SufficiencyReport
    family: List[FunctionalModel]
    provenance: List[str]
    domains_automatic: bool = True
    semisimple: Optional[SemisimpleReport] = None


def representable_family(pair: QuasiPair, tol: float = 1e-9, semisimple: SemisimpleReport = None,
                         seed: int = DEFAULT_SEED):
    """Coordinate functionals and vector states of the interior form, filtered."""
    alg = pair.algebra
    n = alg.dim
    cands = coordinate_family(pair)
    ss = semisimple if semisimple is not None else semisimple_check(pair, seed=seed)
    S = ss.interior_form.matrix if ss.interior_form is not None else np.zeros((n, n))
    if np.any(S):
        probes = list(np.eye(n, dtype=complex))
        if alg.unit is not None:
            probes.append(alg.unit)
        for k, x in enumerate(probes):
            # omega(a) = Omega(a x, x) = x^H S (a x)
            coeffs = alg.right_matrix(x).T @ (S.T @ np.conj(x))
            cands.append(FunctionalModel(pair, coeffs, f"vector-state[{k}]"))
    fam = [f for f in cands if np.any(f.coeffs) and check_representable(f, tol).representable]
    return fam, ss


def fully_representable_check(pair: QuasiPair, family=None, samples: int = 200, tol: float = 1e-8,
                              seed: int = DEFAULT_SEED) -> FullRepReport:
    ss = None
    if family is None:
        family, ss = representable_family(pair, seed=seed)
    elif callable(family):
        family = list(family(pair))
    family = list(family)
    suff = sufficiency_check(pair, family, samples=samples, tol=tol, seed=seed)
    # closure domains are everywhere defined at finite dimension
    return FullRepReport(suff.sufficient, suff, family, [f.provenance for f in family], True, ss)


@dataclass
class ConditionPReport:
    holds: bool
    inconclusive: bool
    tested: int
    hypothesis_true: int
    counterexamples: list = field(default_factory=list)


def _hypothesis_margin(pair, family, a):
    """min over the family of the least eigenvalue of K[i,j] = omega(e_i* a e_j)."""
    if not family:
        return np.inf
    alg = pair.algebra
    T = alg.star_products()
    Ta = np.einsum("iaq,a,qjk->ijk", T, a, alg.structure)  # e_i* a e_j
    m = np.inf
    for f in family:
        K = np.einsum("ijk,k->ij", Ta, f.coeffs)
        K = (K + K.conj().T) / 2
        m = min(m, float(np.linalg.eigvalsh(K)[0]))
    return m


def condition_P_check(pair: QuasiPair, family: Sequence[FunctionalModel], samples: int = 20,
                      tol: float = 1e-8, seed: int = DEFAULT_SEED) -> ConditionPReport:
    """Sample a with omega(x* a x) >= 0 for all x and family omega; test a in A+."""
    rng = np.random.default_rng(seed)
    alg = pair.algebra
    n = alg.dim
    family = list(family)
    cands = []
    if alg.unit is not None:
        cands += [alg.unit.copy(), -alg.unit]
    cands += list(np.eye(n, dtype=complex))
    for _ in range(samples):
        h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        h = (h + alg.star(h)) / 2
        cands.append(h)
        if alg.unit is not None and family:
            lo, hi = -1e3, 1e3
            if _hypothesis_margin(pair, family, h + hi * alg.unit) < 0:
                continue
            for _ in range(60):
                mid = (lo + hi) / 2
                if _hypothesis_margin(pair, family, h + mid * alg.unit) >= 0:
                    hi = mid
                else:
                    lo = mid
            cands.append(h + hi * alg.unit)
    tested = hyp = 0
    bad = []
    inconclusive = False
    for a in cands:
        tested += 1
        if _hypothesis_margin(pair, family, a) < -tol:
            continue
        hyp += 1
        cone = positive_cone_membership(pair, a, tol=1e-7)
        if cone.verdict == "unknown":
            inconclusive = True
        elif cone.verdict == "non-member":
            bad.append({"a": a, "separating": cone.separating, "value": cone.separation_value})
    return ConditionPReport(not bad and not inconclusive, inconclusive, tested, hyp, bad)


# closure of forms along refinement families -------------------------------------
@dataclass
class ClosureReport:
    levels: list
    values: list
    increments: list
    cauchy: list
    converged: bool
    limit: float
    rates: list


def closure_of_form(family, target, omega_factory=None, tol: float = 1e-2) -> ClosureReport:
    """Follow phi_omega(x_n, x_n) along a refinement family.

    family   a RefinementFamily (levels, pairs and prolongation maps)
    target   callable f(t) on [0, 1] sampled at cell midpoints, or a list of
             coordinate vectors, one per level
    omega_factory(pair) -> FunctionalModel, default integration against 1
    """
    vals, xs = [], []
    for k, gp in enumerate(family.pairs):
        pair = gp.pair if hasattr(gp, "pair") else gp
        n = pair.dim
        if callable(target):
            t = (np.arange(n) + 0.5) / n
            x = np.asarray(target(t), dtype=complex)
        else:
            x = np.asarray(target[k], dtype=complex)
        om = omega_factory(pair) if omega_factory else FunctionalModel(pair, np.full(n, 1.0 / n), "integral")
        G = gram_of_functional(om)
        vals.append(float(np.real(np.vdot(x, G @ x))))
        xs.append((x, G))
    cauchy = []
    for k in range(len(xs) - 1):
        x0 = family.prolong(k, xs[k][0])
        d = xs[k + 1][0] - x0
        G = xs[k + 1][1]
        cauchy.append(float(np.sqrt(max(np.real(np.vdot(d, G @ d)), 0.0))))
    inc = [abs(vals[k + 1] - vals[k]) for k in range(len(vals) - 1)]
    rates = [inc[k + 1] / inc[k] if inc[k] > 0 else 0.0 for k in range(len(inc) - 1)]
    conv = bool(len(inc) == 0 or (inc[-1] <= tol and all(inc[k + 1] <= inc[k] + 1e-15 for k in range(len(inc) - 1))))
    conv = conv and bool(len(cauchy) == 0 or cauchy[-1] <= np.sqrt(tol))
    return ClosureReport(list(family.levels), vals, inc, cauchy, conv, vals[-1], rates)
