"""A small log-det barrier solver for maximal-support PSD points of a subspace.

Given Hermitian matrices B_1..B_d spanning a real subspace V, find a PSD
element of V whose range is as large as possible.  The phase-one problem

    maximize t  subject to  sum c_k B_k - t I >= 0,  sum c_k tr(B_k) = 1

is solved by a damped Newton barrier method; when its optimum is zero the
barrier dual gives a PSD matrix orthogonal to V and the problem is restricted
to the kernel of that matrix (facial reduction).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.linalg import null_space

__all__ = ["herm_basis", "herm_coords", "from_coords", "PhaseOneResult", "max_min_eig",
           "maximal_psd_point", "FacialResult"]


def herm_basis(n: int) -> np.ndarray:
    """Frobenius-orthonormal real basis of n x n Hermitian matrices, shape (n*n, n, n)."""
    out = []
    for p in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[p, p] = 1.0
        out.append(E)
    r2 = 1.0 / np.sqrt(2.0)
    for p in range(n):
        for q in range(p + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[p, q] = E[q, p] = r2
            out.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[p, q] = 1j * r2
            F[q, p] = -1j * r2
            out.append(F)
    return np.array(out)


def herm_coords(S, basis) -> np.ndarray:
    return np.real(np.einsum("rij,ji->r", basis, S))


def from_coords(c, basis) -> np.ndarray:
    return np.einsum("r,rij->ij", np.asarray(c, dtype=float), basis)


@dataclass
class PhaseOneResult:
    t: float
    coeffs: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    converged: bool
    iterations: int
    empty: bool = False


def _chol_ok(X):
    try:
        np.linalg.cholesky(X)
        return True
    except np.linalg.LinAlgError:
        return False


def max_min_eig(Bs, mu_final: float = 1e-11, max_newton: int = 60) -> PhaseOneResult:
    """Barrier solution of the phase-one problem for Hermitian B_k (r x r)."""
    Bs = np.asarray(Bs, dtype=complex)
    d, r, _ = Bs.shape
    tau = np.real(np.einsum("kii->k", Bs))
    if np.linalg.norm(tau) <= 1e-12:
        return PhaseOneResult(-np.inf, np.zeros(d), np.zeros((r, r)), np.eye(r) / r, True, 0, True)
    c0 = tau / (tau @ tau)
    N = null_space(tau[None, :]) if d > 1 else np.zeros((1, 0))
    D = np.einsum("kj,kab->jab", N, Bs)  # directions for y
    X0 = np.einsum("k,kab->ab", c0, Bs)
    I = np.eye(r)
    y = np.zeros(N.shape[1])
    t = float(np.linalg.eigvalsh(X0).min()) - 1.0

    def Xof(y, t):
        return X0 + np.einsum("j,jab->ab", y, D) - t * I

    mu = 1.0
    total = 0
    converged = True
    while True:
        for _ in range(max_newton):
            total += 1
            X = Xof(y, t)
            w, U = np.linalg.eigh(X)
            Xis = (U / np.sqrt(w)) @ U.conj().T
            Xi = Xis @ Xis
            W = np.concatenate([np.einsum("ab,jbc,cd->jad", Xis, D, Xis), -Xi[None]], axis=0)
            g = np.concatenate([mu * np.real(np.einsum("ab,jba->j", Xi, D)),
                                [1.0 - mu * np.real(np.trace(Xi))]])
            H = -mu * np.real(np.einsum("iab,jba->ij", W, W))
            try:
                step = -np.linalg.solve(H, g)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(H, g, rcond=None)[0]
            dec = float(g @ step)
            if dec < 1e-10:
                break
            F0 = t + mu * np.sum(np.log(w))
            s = 1.0
            while s > 1e-12:
                yn, tn = y + s * step[:-1], t + s * step[-1]
                Xn = Xof(yn, tn)
                if _chol_ok(Xn):
                    wn = np.linalg.eigvalsh(Xn)
                    if tn + mu * np.sum(np.log(wn)) >= F0 + 0.1 * s * dec:
                        break
                s *= 0.5
            if s <= 1e-12:
                break
            y, t = yn, tn
        else:
            converged = False
        if mu <= mu_final:
            break
        mu = max(mu * 0.2, mu_final)
    X = Xof(y, t)
    Y = mu * np.linalg.inv(X)
    Y = (Y + Y.conj().T) / 2
    Y = Y / np.real(np.trace(Y))
    coeffs = c0 + N @ y
    return PhaseOneResult(float(t), coeffs, X + t * I, Y, converged, total)


@dataclass
class FacialResult:
    S: np.ndarray            # maximal-support PSD element (full coordinates)
    Q: np.ndarray            # orthonormal basis of its range
    kernel: np.ndarray       # orthonormal basis of the joint kernel
    t_star: float
    converged: bool
    rounds: List[dict] = field(default_factory=list)


def maximal_psd_point(n: int, subspace_fn, tol: float = 1e-7, yfrac: float = 1e-4) -> FacialResult:
    """Facial reduction loop.

    subspace_fn(Q) returns Hermitian matrices (k x n x n, full coordinates)
    spanning {S in V : range(S) within range(Q)}.
    """
    Q = np.eye(n, dtype=complex)
    rounds = []
    converged = True
    while Q.shape[1] > 0:
        Bfull = subspace_fn(Q)
        if len(Bfull) == 0:
            Q = Q[:, :0]
            break
        Bs = np.einsum("ai,kab,bj->kij", Q.conj(), Bfull, Q)
        res = max_min_eig(Bs)
        converged &= res.converged
        rounds.append({"dim": Q.shape[1], "t": res.t, "iterations": res.iterations})
        if res.empty or res.t < -tol:
            Q = Q[:, :0]
            break
        if res.t > tol:
            S = Q @ res.X @ Q.conj().T
            S = (S + S.conj().T) / 2
            K = null_space(Q.conj().T) if Q.shape[1] < n else np.zeros((n, 0))
            return FacialResult(S, Q, K, res.t, converged, rounds)
        wy, Vy = np.linalg.eigh(res.Y)
        keep = wy <= yfrac * wy.max()
        if keep.all():
            # no usable dual direction; treat as non-convergence
            converged = False
            break
        Q = Q @ Vy[:, keep]
    S = np.zeros((n, n), dtype=complex)
    K = null_space(Q.conj().T) if Q.shape[1] else np.eye(n, dtype=complex)
    return FacialResult(S, Q, K, 0.0, converged, rounds)
