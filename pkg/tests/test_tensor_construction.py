import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cvec
from qstar.algebra import pointwise_algebra
from qstar.instances import bundled_by_label
from qstar.lp_models import make_lp_pair
from qstar.tensor_construction import (build_tensor_pair, combined_a0_norm_consistency, tensor_algebra,
                                       verify_action_factorization, verify_construction,
                                       verify_involution_isometry)
from qstar.validation import validate_quasi_pair

B = bundled_by_label()
SEEDS = st.integers(0, 2 ** 32 - 1)
CASES = [("lp-grid-n2-p2", "lp-grid-n3-p2"), ("matrix-2-hs", "lp-grid-n2-p2"), ("nilpotent-2", "cyclic-3-l2"),
         ("lp-grid-n3-p1", "scalar")]


def test_pointwise_tensor_is_pointwise():
    T = tensor_algebra(pointwise_algebra(2), pointwise_algebra(3))
    P6 = pointwise_algebra(6)
    assert np.allclose(T.structure, P6.structure)
    assert np.allclose(T.unit, P6.unit)


def test_unit_acts_trivially():
    tp = build_tensor_pair(B["matrix-2-hs"], B["cyclic-3-l2"], "h")
    rng = np.random.default_rng(1)
    T = tp.combined.algebra
    for z in cvec(rng, 5, T.dim):
        assert np.abs(T.mul(T.unit, z) - z).max() < 1e-12
        assert np.abs(T.mul(z, T.unit) - z).max() < 1e-12


def test_elementary_product_rule():
    P, Q = B["matrix-2-hs"], B["nilpotent-2"]
    tp = build_tensor_pair(P, Q, "gamma")
    rng = np.random.default_rng(2)
    x, a = cvec(rng, 2, 4)
    y, b = cvec(rng, 2, 2)
    lhs = tp.combined.algebra.mul(np.kron(x, y), np.kron(a, b))
    assert np.allclose(lhs, np.kron(P.algebra.mul(x, a), Q.algebra.mul(y, b)))
    assert np.allclose(tp.combined.algebra.star(np.kron(a, b)), np.kron(P.algebra.star(a), Q.algebra.star(b)))


@pytest.mark.parametrize("a,b", CASES)
@pytest.mark.parametrize("tag", ["lambda", "gamma", "h"])
def test_construction_reports(a, b, tag):
    P, Q = B[a], B[b]
    if tag == "h" and not (P.normA.is_inner_product and Q.normA.is_inner_product):
        with pytest.raises(ValueError):
            build_tensor_pair(P, Q, tag)
        return
    tp = build_tensor_pair(P, Q, tag)
    assert tp.shape == (P.dim, Q.dim)
    r = verify_construction(tp)
    assert r.passed, r.residuals
    r = verify_action_factorization(tp)
    assert r.passed, r.residuals


@pytest.mark.parametrize("tag", ["lambda", "gamma", "h"])
def test_combined_pair_validates(tag):
    tp = build_tensor_pair(B["lp-grid-n2-p2"], B["matrix-2-hs"], tag)
    r = validate_quasi_pair(tp.combined, samples=6)
    assert r.passed, r.failed()


def test_unit_action_is_identity():
    tp = build_tensor_pair(B["lp-grid-n2-p2"], B["cyclic-3-l2"], "gamma")
    T = tp.combined.algebra
    assert np.allclose(T.right_matrix(T.unit), np.eye(T.dim))
    assert np.allclose(T.left_matrix(T.unit), np.eye(T.dim))


@pytest.mark.parametrize("tag", ["lambda", "gamma", "h"])
def test_involution_isometry(tag):
    tp = build_tensor_pair(B["lp-grid-n2-p2"], B["lp-grid-n3-p2"], tag)
    r = verify_involution_isometry(tp, trials=4)
    assert r.detail["factors_isometric"]
    assert r.passed and not r.inconclusive, r.residuals


def test_involution_isometry_l1():
    tp = build_tensor_pair(make_lp_pair(2, 1).pair, make_lp_pair(3, 1).pair, "gamma")
    r = verify_involution_isometry(tp, trials=6)
    assert r.passed and r.residuals["isometry"] < 1e-12


def test_hilbert_involution_matches_frobenius():
    tp = build_tensor_pair(B["lp-grid-n2-p2"], B["lp-grid-n2-p2"], "h")
    rng = np.random.default_rng(3)
    z = cvec(rng, 4)
    zs = tp.combined.algebra.star(z)
    assert np.allclose(zs, np.conj(z))
    assert tp.norm(zs).value == pytest.approx(tp.norm(z).value, rel=1e-14)


@pytest.mark.parametrize("tag", ["lambda", "gamma"])
def test_a0_consistency(tag):
    tp = build_tensor_pair(B["lp-grid-n3-p1"], B["lp-grid-n2-p2"], tag)
    r = combined_a0_norm_consistency(tp, trials=4)
    assert r.passed, r.detail


@settings(max_examples=10, deadline=None)
@given(SEEDS)
def test_diagonal_multiplier_bound_lambda(seed):
    """On l2 grids the multiplier norm of x (x) y is max|x| max|y|, an exact slack oracle."""
    rng = np.random.default_rng(seed)
    P, Q = make_lp_pair(3, 2).pair, make_lp_pair(2, 2).pair
    tp = build_tensor_pair(P, Q, "lambda")
    x, y, c = cvec(rng, 3), cvec(rng, 2), cvec(rng, 6)
    v = np.kron(x, y)
    bound = np.abs(x).max() * np.abs(y).max() * tp.norm(c).value
    assert tp.norm(tp.combined.algebra.mul(c, v)).value <= bound * (1 + 1e-6)


def test_json_shape():
    tp = build_tensor_pair(B["scalar"], B["matrix-2-hs"], "gamma")
    d = tp.to_json()
    assert d["left_ref"] == "scalar" and d["right_ref"] == "matrix-2-hs" and d["crossnorm"] == "gamma"
    assert d["combined"]["dim"] == 4


def test_unknown_crossnorm():
    with pytest.raises(ValueError):
        build_tensor_pair(B["scalar"], B["scalar"], "epsilon")
