"""Axiom checks for quasi *-algebra pairs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .algebra import QuasiPair
from .bilinear import DEFAULT_SEED
from .operators import a0_norm, left_mult, operator_norm, right_mult

__all__ = ["CheckEntry", "ValidationReport", "validate_quasi_pair", "random_vectors"]

ALG_TOL = 1e-12
OPT_TOL = 1e-6


@dataclass
class CheckEntry:
    name: str
    passed: bool
    residual: float
    detail: str = ""
    level: str = "error"

    def to_json(self):
        return {"name": self.name, "passed": bool(self.passed), "residual": float(self.residual),
                "detail": self.detail, "level": self.level}


@dataclass
class ValidationReport:
    label: str
    entries: List[CheckEntry] = field(default_factory=list)

    def add(self, name, residual, tol, detail="", level="error"):
        self.entries.append(CheckEntry(name, bool(residual <= tol), float(residual), detail, level))

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries if e.level == "error")

    @property
    def warnings(self):
        return [e for e in self.entries if e.level == "warning" and not e.passed]

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def failed(self):
        return [e.name for e in self.entries if not e.passed and e.level == "error"]

    def to_json(self):
        return {"label": self.label, "passed": self.passed,
                "entries": [e.to_json() for e in self.entries]}


def random_vectors(rng, n, k):
    return rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))


def _norm_is_exact(norm) -> bool:
    return norm.kind in ("p", "weighted", "gram", "unitized", "unitized_dual")


def validate_quasi_pair(pair: QuasiPair, samples: int = 20, tol: float = ALG_TOL,
                        seed: int = DEFAULT_SEED, opt_tol: float = OPT_TOL) -> ValidationReport:
    """Check the quasi *-algebra and normed quasi *-algebra axioms on samples."""
    rng = np.random.default_rng(seed)
    alg, N = pair.algebra, pair.normA
    n = alg.dim
    rep = ValidationReport(pair.label)
    ntol = tol if _norm_is_exact(N) else opt_tol
    X = random_vectors(rng, n, samples)
    Y = random_vectors(rng, n, samples)
    A = random_vectors(rng, n, samples)
    al = rng.standard_normal(samples) + 1j * rng.standard_normal(samples)
    mul, star = alg.mul, alg.star

    def rel(u, v):
        return np.abs(u - v).max() / max(1.0, np.abs(u).max(), np.abs(v).max())

    bil = assoc = inv = 0.0
    for x, y, a, c in zip(X, Y, A, al):
        bil = max(bil, rel(mul(c * x + y, a), c * mul(x, a) + mul(y, a)),
                  rel(mul(a, c * x + y), c * mul(a, x) + mul(a, y)))
        assoc = max(assoc, rel(mul(mul(x, a), y), mul(x, mul(a, y))),
                    rel(mul(mul(a, x), y), mul(a, mul(x, y))),
                    rel(mul(x, mul(y, a)), mul(mul(x, y), a)))
        inv = max(inv, rel(star(mul(x, a)), mul(star(a), star(x))),
                  rel(star(mul(a, x)), mul(star(x), star(a))),
                  rel(star(star(a)), a))
    rep.add("bilinearity", bil, tol)
    res = alg.invariant_residuals()
    rep.add("associativity", max(assoc, res["associativity"]), tol)
    rep.add("involution", max(inv, res["involutive"], res["antimultiplicative"]), tol)
    if alg.has_unit:
        rep.add("unit", res["unit"], tol)
        ne = N.eval(alg.unit)
        rep.add("unit_norm", abs(ne - 1.0), tol, f"||e|| = {ne:.12g}", level="warning")

    iso = 0.0
    probes = list(A[: max(4, samples // 2)]) + list(np.eye(n, dtype=complex))
    for a in probes:
        na = N.eval(a)
        iso = max(iso, abs(N.eval(star(a)) - na) / max(1.0, na))
    rep.add("isometric_involution", iso, ntol)

    worst_bound = 0.0
    finite = True
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = 1.0
        for T in (left_mult(pair, e), right_mult(pair, e)):
            r = operator_norm(T, restarts=8, seed=seed)
            finite &= bool(np.isfinite(r.value))
    for x, a in zip(X[:4], A[:4]):
        x0 = a0_norm(pair, x, restarts=8, seed=seed)
        na = N.eval(a)
        for y in (mul(x, a), mul(a, x)):
            worst_bound = max(worst_bound, (N.eval(y) - x0 * na) / max(1.0, x0 * na))
    rep.add("bounded_actions", 0.0 if finite else np.inf, 0.0)
    rep.add("multiplier_bound", max(worst_bound, 0.0), max(ntol, OPT_TOL))
    return rep
