import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cvec
from qstar.crossnorms import TensorElement, hilbert_norm, projective_norm
from qstar.lp_models import (grid_norm, make_lp_pair, product_grid_identify, refinement_family,
                             step_approximation_error, verify_l1_gamma_identity, verify_l2_h_identity)
from qstar.operators import a0_norm
from qstar.representability import semisimple_check
from qstar.validation import validate_quasi_pair

SEEDS = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, np.inf])
@pytest.mark.parametrize("n", [1, 3, 8])
def test_constant_one_has_norm_one(n, p):
    lp = make_lp_pair(n, p)
    assert lp.pair.normA.eval(np.ones(n)) == pytest.approx(1, rel=1e-14)
    assert np.allclose(lp.pair.unit, np.ones(n))


def test_grid_norm_is_an_average():
    assert grid_norm(4, 1).eval([1, -1, 2, 0]) == pytest.approx(1)
    assert grid_norm(2, 2).eval([3, 4j]) == pytest.approx(np.sqrt(12.5))
    assert grid_norm(3, np.inf).eval([1, -5, 2]) == pytest.approx(5)


def test_invalid_parameters():
    for bad in ((0, 2), (2, 0.5)):
        with pytest.raises(ValueError):
            make_lp_pair(*bad)
    with pytest.raises(ValueError):
        grid_norm(2, 0.9)


def test_product_grid_identify():
    assert np.allclose(product_grid_identify([1, 2], [3, 4]), [3, 4, 6, 8])
    assert np.allclose(product_grid_identify(np.ones(3), np.ones(5)), np.ones(15))


def test_l1_projective_mixed_signs():
    X = grid_norm(2, 1)
    M = np.array([[1.0, -2.0], [3.0, -4.0]])
    assert projective_norm(TensorElement(M, X, X)).value == pytest.approx(2.5, abs=1e-12)


@pytest.mark.parametrize("n,m,trials", [(2, 2, 50), (3, 5, 30), (8, 8, 20)])
def test_l1_gamma_identity(n, m, trials):
    r = verify_l1_gamma_identity(n, m, trials=trials, tol=1e-12)
    assert r.passed, r.max_deviation


@pytest.mark.parametrize("n,m", [(2, 2), (4, 3), (16, 16)])
def test_l2_h_identity(n, m):
    r = verify_l2_h_identity(n, m, trials=50, tol=1e-12)
    assert r.passed, r.max_deviation


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_l2_h_is_flattened_norm(seed):
    rng = np.random.default_rng(seed)
    M = cvec(rng, 3, 4)
    flat = np.sqrt(np.mean(np.abs(M) ** 2))
    assert hilbert_norm(TensorElement(M, grid_norm(3, 2), grid_norm(4, 2))) == pytest.approx(flat, rel=1e-12)


# refinement ------------------------------------------------------------------------
def test_prolongation_replicates_cells():
    fam = refinement_family(2, (2, 4, 8))
    assert np.allclose(fam.prolong(0, [1, 2]), [1, 1, 2, 2])
    assert np.allclose(fam.prolong_to(0, 2, [1, 2]), [1] * 4 + [2] * 4)
    assert np.allclose(fam.sample(lambda t: t, 0), [0.25, 0.75])


@settings(max_examples=25, deadline=None)
@given(SEEDS, st.sampled_from([1.0, 2.0, 3.0, np.inf]))
def test_prolongation_preserves_norm(seed, p):
    fam = refinement_family(p, (2, 6, 12))
    x = cvec(np.random.default_rng(seed), 2)
    n0 = fam.pairs[0].pair.normA.eval(x)
    for k in (1, 2):
        assert fam.pairs[k].pair.normA.eval(fam.prolong_to(0, k, x)) == pytest.approx(n0, rel=1e-12)


@pytest.mark.parametrize("levels", [(), (4, 2), (2, 3), (2, 2)])
def test_invalid_levels(levels):
    with pytest.raises(ValueError):
        refinement_family(2, levels)


@pytest.mark.parametrize("n", [1, 4, 16, 64])
def test_step_error_of_identity(n):
    # on each cell |t - midpoint| averages to a quarter of the cell width
    assert step_approximation_error(lambda t: t, n, 1) == pytest.approx(1 / (4 * n), rel=1e-12)
    sub = 64
    assert step_approximation_error(lambda t: t, n, np.inf, sub) == pytest.approx((1 - 1 / sub) / (2 * n), rel=1e-12)


def test_step_error_decays_like_one_over_n():
    f = lambda t: np.sin(3 * t) + 1j * t ** 2
    errs = [step_approximation_error(f, n, 2) for n in (8, 16, 32, 64)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(1.8 < r < 2.2 for r in ratios), ratios


def test_step_error_of_constant():
    assert step_approximation_error(lambda t: np.full_like(t, 2.0), 5, 2) == 0


# the pair itself -------------------------------------------------------------------
@pytest.mark.parametrize("p", [1, 2, np.inf])
def test_lp_pair_validates_and_is_semisimple(p):
    q = make_lp_pair(4, p).pair
    assert validate_quasi_pair(q).passed
    assert semisimple_check(q).semisimple


def test_a0_norm_is_sup():
    lp = make_lp_pair(5, 2)
    x = np.array([0.5, -3, 1j, 2, 0])
    assert lp.a0_norm(x) == pytest.approx(3)
    assert a0_norm(lp.pair, x) == pytest.approx(3, rel=1e-6)
    assert lp.to_json()["label"] == "lp-grid-n5-p2"
