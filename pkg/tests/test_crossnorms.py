import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cvec, random_norm
from qstar.crossnorms import (TensorElement, canonical_tag, check_compatibility_sandwich, check_uniformity,
                              crossnorm_spec, crossnorm_value, hilbert_norm, injective_norm,
                              injective_norm_bruteforce, projective_norm, sphere_bruteforce_max,
                              tensor_operator)
from qstar.norms import gram, lp
from qstar.operators import OperatorMatrix

SEEDS = st.integers(0, 2 ** 32 - 1)
I2 = np.eye(2)


def _bilinear_norm_bruteforce(B, X, Y, density=120):
    """sup Re sum B_ij x_i y_j over the unit balls, by a grid on the X sphere."""
    Yd = Y.dual()
    return sphere_bruteforce_max(lambda F: np.array([Yd.eval(B.T @ x) for x in F]), X, grid_density=density)


# fixed values ------------------------------------------------------------------
def test_injective_examples():
    assert injective_norm(TensorElement(I2, lp(2, 2), lp(2, 2))).value == pytest.approx(1)
    # duals are l-infinity: enumerate the 16 sign-vector pairs
    oracle = max(abs(np.array(f) @ I2 @ np.array(g))
                 for f in itertools.product((-1, 1), repeat=2) for g in itertools.product((-1, 1), repeat=2))
    assert oracle == 2
    assert injective_norm(TensorElement(I2, lp(1, 2), lp(1, 2))).value == pytest.approx(oracle)


def test_projective_examples():
    assert projective_norm(TensorElement(I2, lp(2, 2), lp(2, 2))).value == pytest.approx(2)
    M = np.array([[1, -2], [3, 4]])
    r = projective_norm(TensorElement(M, lp(1, 2), lp(1, 2)))
    assert r.value == pytest.approx(10)
    assert np.allclose(np.abs(r.certificate["dual_form"]), 1)


def test_hilbert_examples():
    assert hilbert_norm(TensorElement(I2, gram(I2), gram(I2))) == pytest.approx(np.sqrt(2))
    assert hilbert_norm(TensorElement(I2, gram(np.diag([1.0, 2.0])), gram(I2))) == pytest.approx(np.sqrt(3))
    with pytest.raises(NotImplementedError):
        hilbert_norm(TensorElement(I2, lp(1, 2), lp(2, 2)))


def test_closed_forms_against_rows():
    rng = np.random.default_rng(5)
    M = cvec(rng, 3, 4)
    # injective with an l-infinity factor is the largest row norm
    lam = injective_norm(TensorElement(M, lp(np.inf, 3), lp(2, 4))).value
    assert lam == pytest.approx(max(np.linalg.norm(r) for r in M), rel=1e-9)
    # projective with an l1 factor is the sum of row norms
    gam = projective_norm(TensorElement(M, lp(1, 3), lp(2, 4))).value
    assert gam == pytest.approx(sum(np.linalg.norm(r) for r in M), rel=1e-12)


def test_tags():
    assert canonical_tag("λ") == "lambda" and canonical_tag("projective") == "gamma"
    with pytest.raises(ValueError):
        canonical_tag("epsilon")
    v = crossnorm_value("h", TensorElement(I2, lp(2, 2), lp(2, 2)))
    assert v.value == pytest.approx(np.sqrt(2)) and v.exact


def test_decomposition_independent_matrix():
    rng = np.random.default_rng(6)
    xs, ys = cvec(rng, 2, 3), cvec(rng, 2, 2)
    a = TensorElement.from_decomposition(xs, ys, lp(2, 3), lp(2, 2))
    # the same tensor written with a different pair of rank-one terms
    x2 = [xs[0] + xs[1], xs[1]]
    y2 = [ys[0], ys[1] - ys[0]]
    b = TensorElement.from_decomposition(x2, y2, lp(2, 3), lp(2, 2))
    assert np.allclose(a.matrix, b.matrix)
    with pytest.raises(ValueError):
        TensorElement(np.ones((2, 2)), lp(2, 3), lp(2, 2))


# properties --------------------------------------------------------------------
@settings(max_examples=40, deadline=None)
@given(SEEDS)
def test_cross_property(seed):
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 5, 2))
    X, Y = random_norm(rng, n), random_norm(rng, m)
    x, y = cvec(rng, n), cvec(rng, m)
    z = TensorElement.elementary(x, y, X, Y)
    ref = X.eval(x) * Y.eval(y)
    assert injective_norm(z).value == pytest.approx(ref, rel=1e-6, abs=1e-9)
    assert projective_norm(z).value == pytest.approx(ref, rel=1e-6, abs=1e-9)
    if X.is_inner_product and Y.is_inner_product:
        assert hilbert_norm(z) == pytest.approx(ref, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_interval_and_order(seed):
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 4, 2))
    X, Y = random_norm(rng, n), random_norm(rng, m)
    z = TensorElement(cvec(rng, n, m), X, Y)
    lam, gam = injective_norm(z), projective_norm(z)
    for r in (lam, gam):
        assert r.lower <= r.value + 1e-12 and r.value <= r.upper + 1e-12
        assert r.gap == pytest.approx(max(r.upper - r.lower, 0))
    assert lam.lower <= gam.upper * (1 + 1e-9)


@settings(max_examples=15, deadline=None)
@given(SEEDS)
def test_projective_certificates(seed):
    """Both sides of the gamma interval are checked without the solver."""
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 4, 2))
    X, Y = random_norm(rng, n, ("l2", "linf", "gram")), random_norm(rng, m)
    M = cvec(rng, n, m)
    r = projective_norm(TensorElement(M, X, Y))
    atoms = r.certificate["decomposition"]
    rebuilt = sum(w * np.outer(x, y) for w, x, y in atoms)
    assert np.allclose(rebuilt, M, atol=1e-7 * max(1, np.abs(M).max()))
    for w, x, y in atoms:
        assert X.eval(x) == pytest.approx(1) and Y.eval(y) == pytest.approx(1)
    assert sum(w for w, _, _ in atoms) == pytest.approx(r.upper, rel=1e-7)
    B = r.certificate["dual_form"]
    beta = _bilinear_norm_bruteforce(B, X, Y)
    # an independent dual bound never exceeds the primal decomposition value
    assert np.real(np.sum(B * M)) / max(beta, 1.0) <= r.upper * (1 + 1e-6)
    assert np.real(np.sum(B * M)) / beta == pytest.approx(r.lower, rel=1e-2)


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_involution_invariance(seed):
    """Coordinatewise conjugation is isometric on l^p factors, hence on the cross-norms."""
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 4, 2))
    X, Y = random_norm(rng, n, ("l1", "l2", "linf")), random_norm(rng, m, ("l1", "l2", "linf"))
    M = cvec(rng, n, m)
    for f in (injective_norm, projective_norm):
        a = f(TensorElement(M, X, Y)).value
        b = f(TensorElement(np.conj(M), X, Y)).value
        assert a == pytest.approx(b, rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_injective_vs_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 4, 2))
    X, Y = random_norm(rng, n), random_norm(rng, m)
    z = TensorElement(cvec(rng, n, m), X, Y)
    assert injective_norm(z).value == pytest.approx(injective_norm_bruteforce(z), abs=3e-3)


def test_bruteforce_fixed_values():
    assert injective_norm_bruteforce(TensorElement(I2, lp(2, 2), lp(2, 2))) == pytest.approx(1, abs=2e-3)
    assert injective_norm_bruteforce(TensorElement(I2, lp(1, 2), lp(1, 2))) == pytest.approx(2, abs=2e-3)
    x, y = np.array([1, 2j]), np.array([3, -1])
    z = TensorElement.elementary(x, y, lp(2, 2), lp(np.inf, 2))
    assert injective_norm_bruteforce(z) == pytest.approx(np.sqrt(5) * 3, abs=2e-3 * 7)
    with pytest.raises(ValueError):
        injective_norm_bruteforce(TensorElement(np.ones((3, 4)), lp(2, 3), lp(2, 4)))


# sandwich ----------------------------------------------------------------------
@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_hilbert_sandwich(seed):
    rng = np.random.default_rng(seed)
    n, m = (int(k) for k in rng.integers(1, 5, 2))
    z = TensorElement(cvec(rng, n, m), lp(2, n), lp(2, m))
    assert check_compatibility_sandwich(z, hilbert_norm).passed
    assert check_compatibility_sandwich(z, lambda t: projective_norm(t).value).passed


def test_sandwich_violation():
    z = TensorElement(np.array([[1, 2j], [0, 1]]), lp(2, 2), lp(2, 2))
    r = check_compatibility_sandwich(z, lambda t: 0.5 * injective_norm(t).value)
    assert not r.passed and r.violation == "below-injective"
    assert "injective" in r.certificates


# tensor operators and uniformity -----------------------------------------------
def test_tensor_operator_identity():
    op = tensor_operator(OperatorMatrix(I2, lp(2, 2), lp(2, 2)), OperatorMatrix(np.eye(3), lp(1, 3), lp(1, 3)),
                         "gamma")
    assert np.allclose(op.matrix, np.eye(6))
    assert op.domain.kind == "projective"


@pytest.mark.parametrize("tag", ["lambda", "gamma", "h"])
def test_uniformity_identity(tag):
    T = OperatorMatrix(I2, lp(2, 2), lp(2, 2))
    r = check_uniformity(T, T, tag, samples=3)
    assert r.passed and r.tensor_norm == pytest.approx(1)


def test_uniformity_diagonal_and_nilpotent():
    rng = np.random.default_rng(7)
    d1, d2 = cvec(rng, 3), cvec(rng, 2)
    T1 = OperatorMatrix(np.diag(d1), lp(2, 3), lp(2, 3))
    T2 = OperatorMatrix(np.diag(d2), lp(2, 2), lp(2, 2))
    r = check_uniformity(T1, T2, "lambda", samples=3)
    assert r.tensor_norm == pytest.approx(np.abs(d1).max() * np.abs(d2).max())
    A = OperatorMatrix([[0, 1], [0, 0]], lp(2, 2), lp(2, 2))
    B = OperatorMatrix([[2, 0], [0, 0]], lp(2, 2), lp(2, 2))
    r = check_uniformity(A, B, "gamma", samples=3)
    assert r.passed and r.tensor_norm == pytest.approx(2)


@settings(max_examples=10, deadline=None)
@given(SEEDS, st.sampled_from(["lambda", "gamma"]))
def test_uniformity_random(seed, tag):
    rng = np.random.default_rng(seed)
    n1, m1, n2, m2 = (int(k) for k in rng.integers(1, 4, 4))
    kinds = ("l1", "l2", "gram")
    T1 = OperatorMatrix(cvec(rng, m1, n1), random_norm(rng, n1, kinds), random_norm(rng, m1, kinds))
    T2 = OperatorMatrix(cvec(rng, m2, n2), random_norm(rng, n2, kinds), random_norm(rng, m2, kinds))
    r = check_uniformity(T1, T2, tag, samples=2)
    assert r.passed and not r.inconclusive


def test_crossnorm_spec_eval_matches():
    rng = np.random.default_rng(8)
    M = cvec(rng, 2, 3)
    X, Y = lp(1, 2), lp(2, 3)
    assert crossnorm_spec("gamma", X, Y).eval(M.reshape(-1)) == pytest.approx(
        projective_norm(TensorElement(M, X, Y)).value, rel=1e-9)
    assert crossnorm_spec("lambda", X, Y).eval(M.reshape(-1)) == pytest.approx(
        injective_norm(TensorElement(M, X, Y)).value, rel=1e-6)
