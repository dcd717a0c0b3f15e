"""Representations, functionals and forms on tensor product pairs.

Covers restriction and tensoring of *-representations, tensor functionals and
forms, the phi_Omega form with its graph-type norm, and harnesses checking the
transfer of *-semisimplicity and full representability between factors and the
tensor product.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import block_diag, null_space

from .algebra import QuasiPair
from .bilinear import DEFAULT_SEED
from .representability import (FormModel, FunctionalModel, GNSData, NotRepresentableError,
                               check_representable, condition_P_check, elementary_quadratic_max,
                               fully_representable_check, gns, gram_of_functional,
                               invariance_residual, quadratic_form_max, representable_family,
                               semisimple_check)
from .tensor_construction import TensorQuasiPair, build_tensor_pair

__all__ = [
    "RepresentationModel",
    "restrict_representation",
    "vector_functionals_from_rep",
    "tensor_representation",
    "tensor_functional",
    "tensor_form",
    "TensorFormResult",
    "restrict_functional_and_form",
    "form_membership",
    "PhiOmegaForm",
    "phi_omega_build",
    "HarnessRow",
    "HarnessReport",
    "theorem_SS_harness",
    "full_rep_transfer_harness",
    "faithfulness_check",
    "direct_sum",
    "unitary_equivalence_probe",
]

REP_TOL = 1e-10


# representations -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class RepresentationModel:
    """pi(a) = sum_i a_i ops[i] on C^hilbert_dim."""

    pair: QuasiPair
    ops: np.ndarray
    domain: str = "H"

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim != 3 or ops.shape[0] != self.pair.dim or ops.shape[1] != ops.shape[2]:
            raise ValueError("representation operators have the wrong shape")
        object.__setattr__(self, "ops", ops)

    @property
    def hilbert_dim(self) -> int:
        return self.ops.shape[1]

    def pi(self, a) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(a, dtype=complex), self.ops)

    @classmethod
    def from_gns(cls, data: GNSData, pair: QuasiPair = None) -> "RepresentationModel":
        """The GNS representation; unitized data is restricted to the original pair."""
        if data.unitized:
            if pair is None:
                raise ValueError("pass the original pair for unitized GNS data")
            return cls(pair, data.rep[:-1], "GNS")
        return cls(pair if pair is not None else data.pair, data.rep, "GNS")

    def invariants(self) -> dict:
        alg = self.pair.algebra
        n = alg.dim
        P = self.ops
        star = max((float(np.abs(np.einsum("r,rab->ab", alg.involution[:, i], P) - P[i].conj().T).max())
                    for i in range(n)), default=0.0)
        mult = 0.0
        for i in range(n):
            for j in range(n):
                Pij = np.einsum("k,kab->ab", alg.structure[i, j], P)
                mult = max(mult, float(np.abs(Pij - P[i] @ P[j]).max()))
        out = {"star": star, "multiplicative": mult}
        if alg.unit is not None:
            out["unit"] = float(np.abs(self.pi(alg.unit) - np.eye(self.hilbert_dim)).max()) if self.hilbert_dim else 0.0
        return out

    def is_valid(self, tol: float = REP_TOL) -> bool:
        inv = self.invariants()
        return inv["star"] <= tol and inv["multiplicative"] <= tol


@dataclass
class RestrictionReport:
    commutation: float
    factorization: float
    left_valid: bool
    right_valid: bool
    tol: float = REP_TOL

    @property
    def passed(self) -> bool:
        return self.commutation <= self.tol and self.factorization <= self.tol and self.left_valid and self.right_valid


def restrict_representation(pi: RepresentationModel, tp: TensorQuasiPair, tol: float = REP_TOL):
    """pi_1(a) = pi(a (x) e_B), pi_2(b) = pi(e_A (x) b); returns (pi_1, pi_2, report)."""
    P, Q = tp.left, tp.right
    if P.unit is None or Q.unit is None:
        raise ValueError("restriction needs unital factors")
    n, m = P.dim, Q.dim
    O = pi.ops.reshape(n, m, pi.hilbert_dim, pi.hilbert_dim)
    ops1 = np.einsum("j,ijab->iab", Q.unit, O)
    ops2 = np.einsum("i,ijab->jab", P.unit, O)
    p1, p2 = RepresentationModel(P, ops1, pi.domain), RepresentationModel(Q, ops2, pi.domain)
    comm = fac = 0.0
    for i in range(n):
        for j in range(m):
            A, B = ops1[i], ops2[j]
            fac = max(fac, float(np.abs(O[i, j] - A @ B).max()), float(np.abs(O[i, j] - B @ A).max()))
            comm = max(comm, float(np.abs(A @ B - B @ A).max()))
    rep = RestrictionReport(comm, fac, p1.is_valid(tol), p2.is_valid(tol), tol)
    return p1, p2, rep


def vector_functionals_from_rep(pi: RepresentationModel, xi, tp: TensorQuasiPair):
    """omega_1(a) = <pi(a (x) e_B) xi, xi>, omega_2(b) = <pi(e_A (x) b) xi, xi>."""
    p1, p2, _ = restrict_representation(pi, tp)
    xi = np.asarray(xi, dtype=complex)
    c1 = np.einsum("a,iab,b->i", np.conj(xi), p1.ops, xi)
    c2 = np.einsum("a,iab,b->i", np.conj(xi), p2.ops, xi)
    return (FunctionalModel(tp.left, c1, "vector-functional"),
            FunctionalModel(tp.right, c2, "vector-functional"))


def tensor_representation(pi1: RepresentationModel, pi2: RepresentationModel,
                          tp: TensorQuasiPair) -> RepresentationModel:
    """(pi_1 (x) pi_2)(a (x) b) = pi_1(a) (x) pi_2(b) on H_1 (x) H_2."""
    ops = np.einsum("iab,jcd->ijacbd", pi1.ops, pi2.ops)
    n, m = pi1.pair.dim, pi2.pair.dim
    r = pi1.hilbert_dim * pi2.hilbert_dim
    return RepresentationModel(tp.combined, ops.reshape(n * m, r, r), "H1(x)H2")


def direct_sum(reps: Sequence[RepresentationModel]) -> RepresentationModel:
    pair = reps[0].pair
    n = pair.dim
    ops = np.array([block_diag(*[r.ops[i] for r in reps]) for i in range(n)])
    return RepresentationModel(pair, ops, "direct-sum")


@dataclass
class FaithfulnessReport:
    faithful: bool
    rank: int
    kernel: np.ndarray


def faithfulness_check(pi: RepresentationModel, tol: float = 1e-10) -> FaithfulnessReport:
    """pi is faithful iff a -> pi(a) is injective."""
    n = pi.pair.dim
    if pi.hilbert_dim == 0:
        return FaithfulnessReport(n == 0, 0, np.eye(n, dtype=complex))
    A = pi.ops.reshape(n, -1).T
    s = np.linalg.svd(A, compute_uv=False)
    r = int((s > tol * max(1.0, s.max())).sum())
    K = null_space(A, rcond=tol) if r < n else np.zeros((n, 0), dtype=complex)
    return FaithfulnessReport(r == n, r, K)


def unitary_equivalence_probe(pi_a: RepresentationModel, xi_a, pi_b: RepresentationModel, xi_b,
                              tol: float = 1e-8) -> dict:
    """Look for W with W pi_a(e_k) = pi_b(e_k) W and W xi_a = xi_b; report whether W is unitary.

    This is an observation, not a theorem: the intertwiner is solved by least squares.
    """
    ra, rb = pi_a.hilbert_dim, pi_b.hilbert_dim
    if ra != rb:
        return {"same_dimension": False, "intertwiner_residual": np.inf, "unitary": False}
    r = ra
    I = np.eye(r)
    rows = [np.kron(I, A.T) - np.kron(B, I) for A, B in zip(pi_a.ops, pi_b.ops)]
    rows.append(np.kron(I, np.asarray(xi_a)[None, :]))
    rhs = np.concatenate([np.zeros(r * r * len(pi_a.ops)), np.asarray(xi_b, dtype=complex)])
    w = np.linalg.lstsq(np.vstack(rows), rhs, rcond=None)[0]
    W = w.reshape(r, r)
    res = float(np.linalg.norm(np.vstack(rows) @ w - rhs))
    uni = float(np.abs(W.conj().T @ W - I).max())
    return {"same_dimension": True, "intertwiner_residual": res, "unitary_residual": uni,
            "unitary": bool(res <= tol and uni <= tol)}


# functionals and forms --------------------------------------------------------
def tensor_functional(om1: FunctionalModel, om2: FunctionalModel, tp: TensorQuasiPair) -> FunctionalModel:
    """(omega_1 (x) omega_2)(a (x) b) = omega_1(a) omega_2(b)."""
    return FunctionalModel(tp.combined, np.kron(om1.coeffs, om2.coeffs),
                           f"({om1.provenance})(x)({om2.provenance})")


def form_membership(form: FormModel, tol: float = 1e-8, seed: int = DEFAULT_SEED) -> dict:
    """PSD, invariance and boundedness of a form against the pair's norm."""
    S = form.matrix
    lam = float(np.linalg.eigvalsh((S + S.conj().T) / 2)[0])
    inv = invariance_residual(form)
    bound, exact = quadratic_form_max(S, form.pair.normA, seed=seed)
    scale = max(1.0, np.abs(S).max())
    ok = lam >= -tol * scale and inv <= tol * scale and form.hermitian_residual <= tol * scale and bound <= 1 + tol
    return {"member": bool(ok), "min_eigenvalue": lam, "invariance": inv, "bound": bound,
            "bound_exact": exact}


@dataclass
class TensorFormResult:
    form: FormModel
    raw_bound: float
    bound_lower: float
    bound_upper: float
    exact: bool
    psd_min: float
    invariance: float


def _ball_l2_radius(N) -> float:
    """sup ||x||_2 over the unit ball of N."""
    v, _ = quadratic_form_max(np.eye(N.dim), N)
    return float(np.sqrt(v))


def tensor_form(phi1: FormModel, phi2: FormModel, tp: TensorQuasiPair, seed: int = DEFAULT_SEED) -> TensorFormResult:
    """Normalized phi_1 (x) phi_2 on the tensor pair."""
    if not np.any(phi1.matrix) or not np.any(phi2.matrix):
        raise ValueError("tensor_form needs nonzero factor forms")
    S = np.kron(phi1.matrix, phi2.matrix)
    N = tp.combined.normA
    if tp.crossnorm == "gamma":
        # extreme points of the projective ball are elementary tensors
        b1, e1 = quadratic_form_max(phi1.matrix, tp.left.normA, seed=seed)
        b2, e2 = quadratic_form_max(phi2.matrix, tp.right.normA, seed=seed)
        lo, exact = b1 * b2, e1 and e2
        hi = lo if exact else np.inf
    elif tp.crossnorm == "h":
        lo, exact = quadratic_form_max(S, N, seed=seed)
        hi = lo
    else:
        lo, _ = elementary_quadratic_max(S, tp.left.normA, tp.right.normA, seed=seed)
        # the injective ball is larger than the projective one: lower bound only
        exact, hi = False, np.inf
    form = FormModel(tp.combined, S / lo, 1.0, f"tensor_form({phi1.provenance},{phi2.provenance})", exact)
    lam = float(np.linalg.eigvalsh((S + S.conj().T) / 2)[0])
    return TensorFormResult(form, lo, lo, hi, bool(exact), lam, invariance_residual(form))


def restrict_functional_and_form(Omega: FunctionalModel, Phi: Optional[FormModel], tp: TensorQuasiPair):
    """omega_1(a) = Omega(a (x) e_B), phi_1(a, a') = Phi(a (x) e_B, a' (x) e_B), and the B side."""
    P, Q = tp.left, tp.right
    if P.unit is None or Q.unit is None:
        raise ValueError("restriction needs unital factors")
    n, m = P.dim, Q.dim
    C = Omega.coeffs.reshape(n, m)
    om1 = FunctionalModel(P, C @ Q.unit, "restriction")
    om2 = FunctionalModel(Q, P.unit @ C, "restriction")
    if Phi is None:
        return om1, om2, None, None
    E1 = np.kron(np.eye(n), Q.unit[:, None])   # a -> a (x) e_B
    E2 = np.kron(P.unit[:, None], np.eye(m))   # b -> e_A (x) b
    S = Phi.matrix
    ph1 = FormModel(P, E1.conj().T @ S @ E1, Phi.bound, "restriction")
    ph2 = FormModel(Q, E2.conj().T @ S @ E2, Phi.bound, "restriction")
    return om1, om2, ph1, ph2


# phi_Omega ---------------------------------------------------------------------
@dataclass
class PhiOmegaForm:
    tp: TensorQuasiPair
    omega: FunctionalModel
    gns: GNSData
    matrix: np.ndarray
    gamma_min: float
    gamma_upper: float
    gamma_exact: bool
    restriction_residual: float
    closed: bool = True             # finite dimension: everywhere defined, hence closed
    identity_map_closed: bool = True

    def value(self, c, cp=None) -> complex:
        c = np.asarray(c, dtype=complex)
        cp = c if cp is None else np.asarray(cp, dtype=complex)
        return complex(np.vdot(cp, self.matrix @ c))

    def norm(self, c) -> float:
        """sqrt(n(c)^2 + phi_Omega(c, c))."""
        c = np.asarray(c, dtype=complex)
        if not np.any(c):
            return 0.0
        nc = self.tp.norm(c).value
        return float(np.sqrt(nc ** 2 + max(np.real(self.value(c)), 0.0)))


def phi_omega_build(Omega: FunctionalModel, tp: TensorQuasiPair, seed: int = DEFAULT_SEED) -> PhiOmegaForm:
    """GNS of Omega and the form <pi(c) xi, pi(c') xi> with its continuity constant."""
    rep = check_representable(Omega)
    if not rep.representable:
        raise NotRepresentableError("Omega is not representable", rep)
    data = gns(Omega)
    kappa = data.embedding[:, :-1] if data.unitized else data.embedding
    K = kappa.conj().T @ kappa
    K = (K + K.conj().T) / 2
    G = gram_of_functional(Omega)
    restr = float(np.abs(K - G).max())
    N = tp.combined.normA
    if N.is_inner_product:
        g2, exact = quadratic_form_max(K, N, seed=seed)
        hi = g2
    elif N.kind in ("projective", "injective"):
        g2, exact = elementary_quadratic_max(K, N.left, N.right, seed=seed)
        exact = exact and N.kind == "projective"
        r = _ball_l2_radius(N.left) * _ball_l2_radius(N.right)
        # the projective ball lies in the l2 ball of radius r_X r_Y
        hi = float(np.linalg.eigvalsh(K)[-1]) * r ** 2 if N.kind == "projective" else np.inf
        hi = max(hi, g2)
    else:
        g2, exact = quadratic_form_max(K, N, seed=seed)
        hi = g2 if exact else np.inf
    return PhiOmegaForm(tp, Omega, data, K, float(np.sqrt(max(g2, 0.0))), float(np.sqrt(max(hi, 0.0))),
                        bool(exact), restr)


# harnesses ---------------------------------------------------------------------
@dataclass
class HarnessRow:
    instance: str
    theorem: str
    direction: str
    verdict: str          # pass | fail | vacuous | inconclusive | skipped
    margin: float
    runtime_ms: float
    hypothesis: str = ""

    def to_json(self, with_runtime: bool = False):
        d = {"instance": self.instance, "theorem": self.theorem, "direction": self.direction,
             "verdict": self.verdict, "margin": float(self.margin), "hypothesis": self.hypothesis}
        if with_runtime:
            d["runtime_ms"] = float(self.runtime_ms)
        return d


@dataclass
class HarnessReport:
    rows: List[HarnessRow] = field(default_factory=list)
    forms: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.verdict in ("pass", "vacuous", "skipped") for r in self.rows)

    @property
    def inconclusive(self) -> bool:
        return any(r.verdict == "inconclusive" for r in self.rows)


def _implication(premise: bool, conclusion: bool) -> str:
    if not premise:
        return "vacuous"
    return "pass" if conclusion else "fail"


def theorem_SS_harness(P: QuasiPair, Q: QuasiPair, crossnorm: str = "gamma", tol: float = 1e-8,
                       seed: int = DEFAULT_SEED, instance: str = "") -> HarnessReport:
    """(1) tensor *-semisimple  =>  (2) both factors *-semisimple, and the converse for gamma/h."""
    t0 = time.perf_counter()
    tp = build_tensor_pair(P, Q, crossnorm)
    sP = semisimple_check(P, tol=tol, seed=seed)
    sQ = semisimple_check(Q, tol=tol, seed=seed)
    sT = semisimple_check(tp.combined, tol=tol, seed=seed)
    label = instance or tp.combined.label
    rep = HarnessReport()
    rep.detail = {"left": sP.verdict, "right": sQ.verdict, "tensor": sT.verdict}
    unknown = "unknown" in (sP.verdict, sQ.verdict, sT.verdict)
    f1 = sT.semisimple
    f2 = sP.semisimple and sQ.semisimple
    margin12 = min(sP.min_eigenvalue, sQ.min_eigenvalue)
    ms = (time.perf_counter() - t0) * 1e3
    v = "inconclusive" if unknown else _implication(f1, f2)
    rep.rows.append(HarnessRow(label, "SS", "(1)=>(2)", v, margin12, ms, "always"))
    hyp = "guaranteed" if tp.crossnorm in ("gamma", "h") else "empirical"
    margin21 = sT.min_eigenvalue
    v = "inconclusive" if unknown else _implication(f2, f1)
    if f2 and not unknown:
        # constructive witness: the normalized tensor of the factor interior forms
        tf = tensor_form(sP.interior_form, sQ.interior_form, tp, seed=seed)
        S = tf.form.matrix
        wit = float(np.linalg.eigvalsh((S + S.conj().T) / 2)[0])
        rep.detail["witness_min_eigenvalue"] = wit
        rep.detail["witness_invariance"] = tf.invariance
        if wit <= tol or tf.invariance > 1e-9:
            v = "fail"
        margin21 = min(margin21, wit) if f1 else wit
    rep.rows.append(HarnessRow(label, "SS", "(2)=>(1)", v, margin21,
                               (time.perf_counter() - t0) * 1e3, hyp))
    if not rep.passed:
        rep.forms = {"left": sP.interior_form, "right": sQ.interior_form, "tensor": sT.interior_form}
    return rep


def _tensor_family(fP, fQ, tp, tol):
    fam = [tensor_functional(a, b, tp) for a in fP for b in fQ]
    own, ss = representable_family(tp.combined, tol=tol)
    fam += own
    return [f for f in fam if check_representable(f, tol).representable], ss


def full_rep_transfer_harness(P: QuasiPair, Q: QuasiPair, crossnorm: str = "gamma", tol: float = 1e-8,
                              samples: int = 200, seed: int = DEFAULT_SEED, instance: str = "",
                              families=None) -> HarnessReport:
    """Full representability of factors vs tensor product in both directions.

    families, if given, is (family_P, family_Q) used in place of the generated ones.
    """
    t0 = time.perf_counter()
    tp = build_tensor_pair(P, Q, crossnorm)
    label = instance or tp.combined.label
    if families is None:
        fP, _ = representable_family(P, tol=1e-9, seed=seed)
        fQ, _ = representable_family(Q, tol=1e-9, seed=seed)
    else:
        fP, fQ = [list(f) for f in families]
    rP = fully_representable_check(P, fP, samples=samples, tol=tol, seed=seed)
    rQ = fully_representable_check(Q, fQ, samples=samples, tol=tol, seed=seed)
    if families is None:
        fT, _ = _tensor_family(fP, fQ, tp, 1e-9)
    else:
        # supplied families induce the tensor family through products only
        fT = [tensor_functional(a, b, tp) for a in fP for b in fQ]
    rT = fully_representable_check(tp.combined, fT, samples=samples, tol=tol, seed=seed)
    rep = HarnessReport()
    rep.detail = {"left": rP.fully_representable, "right": rQ.fully_representable,
                  "tensor": rT.fully_representable,
                  "families": {"left": [f.provenance for f in fP], "right": [f.provenance for f in fQ],
                               "tensor": [f.provenance for f in fT]}}
    facs = rP.fully_representable and rQ.fully_representable
    ten = rT.fully_representable
    m_f = min(rP.sufficiency.worst_margin, rQ.sufficiency.worst_margin)
    m_t = rT.sufficiency.worst_margin
    ms = (time.perf_counter() - t0) * 1e3
    rep.rows.append(HarnessRow(label, "full-rep", "tensor=>factors", _implication(ten, facs), m_f, ms,
                               "uniform cross-norm"))
    # the same implication read from the failing side
    rep.rows.append(HarnessRow(label, "full-rep", "factor-failure=>tensor-failure",
                               _implication(not facs, not ten), m_t, ms, "uniform cross-norm"))
    cP = condition_P_check(P, fP, seed=seed)
    cQ = condition_P_check(Q, fQ, seed=seed)
    rep.detail["condition_P"] = {"left": cP.holds, "right": cQ.holds}
    ms = (time.perf_counter() - t0) * 1e3
    if cP.inconclusive or cQ.inconclusive:
        rep.rows.append(HarnessRow(label, "full-rep", "factors=>tensor", "skipped", m_t, ms,
                                   "condition (P) inconclusive"))
    elif not (cP.holds and cQ.holds):
        rep.rows.append(HarnessRow(label, "full-rep", "factors=>tensor", "skipped", m_t, ms,
                                   "condition (P) fails"))
    else:
        hyp = "guaranteed" if tp.crossnorm == "gamma" else "empirical"
        rep.rows.append(HarnessRow(label, "full-rep", "factors=>tensor", _implication(facs, ten), m_t, ms, hyp))
    return rep
