import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cvec
from qstar.algebra import QuasiPair, StarAlgebraModel
from qstar.instances import bundled_by_label, bundled_suite, nilpotent_pair, random_star_pair
from qstar.lp_models import make_lp_pair, refinement_family
from qstar.norms import lp
from qstar.representability import (FunctionalModel, NotRepresentableError, check_representable,
                                    closure_of_form, compose_functional, condition_P_check, coordinate_family,
                                    fully_representable_check, gns, gram_of_functional,
                                    positive_cone_membership, representable_family, semisimple_bruteforce,
                                    semisimple_check, sufficiency_check)

SEEDS = st.integers(0, 2 ** 32 - 1)
PW = make_lp_pair(2, 2).pair
NIL = nilpotent_pair(2)


def om(pair, c):
    return FunctionalModel(pair, np.asarray(c, dtype=complex), "test")


# Gram matrices and (L.1)-(L.3) ---------------------------------------------------
def test_gram_examples():
    assert np.allclose(gram_of_functional(om(PW, [1, 1])), np.eye(2))
    assert np.allclose(gram_of_functional(om(PW, [0, 0])), 0)
    assert np.allclose(gram_of_functional(om(PW, [1, 0])), np.diag([1, 0]))


def test_representability_examples():
    r = check_representable(om(PW, [1, 1]))
    assert r.representable and np.allclose(r.gamma, 1)
    r = check_representable(om(PW, [1, -1]))
    assert not r.representable and not r.l1
    v = r.certificates["negative_eigenvector"]
    assert np.real(np.vdot(v, gram_of_functional(om(PW, [1, -1])) @ v)) < 0
    r = check_representable(om(PW, [1, 0]))
    assert r.representable and r.gamma[1] == pytest.approx(0)


def test_off_unit_functional_rejected():
    # omega(eps) = 1, omega(1) = 0 on the dual numbers has Gram [[0, 1], [1, 0]]
    r = check_representable(om(NIL, [0, 1]))
    assert not r.representable
    assert "negative_eigenvector" in r.certificates


# GNS -------------------------------------------------------------------------------
def test_gns_pointwise_full():
    g = gns(om(PW, [1, 1]))
    assert g.hilbert_dim == 2
    a = np.array([2.0, -3j])
    assert np.allclose(np.sort_complex(np.linalg.eigvals(g.pi(a))), np.sort_complex(a))
    assert np.vdot(g.cyclic_vector, g.cyclic_vector) == pytest.approx(2)
    assert g.residuals["reproduction"] < 1e-12


def test_gns_pointwise_quotient():
    g = gns(om(PW, [1, 0]))
    assert g.hilbert_dim == 1
    a = np.array([5.0, 7.0])
    assert g.pi(a)[0, 0] == pytest.approx(5)
    assert abs(g.cyclic_vector[0]) == pytest.approx(1)


def test_gns_zero_functional_rejected():
    C = np.zeros((2, 2, 2), dtype=complex)
    C[0, 0, 0] = 1.0
    q = QuasiPair(StarAlgebraModel(C, np.eye(2), None), lp(2, 2), "nonunital")
    with pytest.raises(NotRepresentableError):
        gns(om(q, [0, 0]))
    g = gns(om(q, [1, 0]))
    assert g.unitized and g.residuals["reproduction"] < 1e-8


def test_gns_not_representable_raises():
    with pytest.raises(NotRepresentableError):
        gns(om(PW, [1, -1]))


@pytest.mark.parametrize("q", bundled_suite(), ids=lambda q: q.label)
def test_gns_invariants(q):
    fam, _ = representable_family(q)
    for f in fam:
        g = gns(f)
        r = g.residuals
        assert r["reproduction"] <= 1e-8 and r["star"] <= 1e-10 and r["multiplicative"] <= 1e-10
        assert r["cyclic_rank"] == g.hilbert_dim
        # the induced form at the unit reproduces the functional
        for a in np.eye(q.dim):
            assert g.form(a, q.unit) == pytest.approx(f(a), abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(SEEDS, st.integers(0, len(bundled_suite()) - 1))
def test_composed_functional_representable(seed, k):
    q = bundled_suite()[k]
    fam, _ = representable_family(q)
    x = cvec(np.random.default_rng(seed), q.dim)
    for f in fam:
        assert check_representable(compose_functional(f, x), tol=1e-8).representable


# positive cone ----------------------------------------------------------------------
def test_cone_examples():
    r = positive_cone_membership(PW, [1, 4])
    assert r.verdict == "member" and not r.closure_only
    rebuilt = sum(PW.algebra.mul(PW.algebra.star(x), x) for x in r.factors)
    assert np.allclose(rebuilt, [1, 4], atol=1e-6)
    r = positive_cone_membership(PW, [-1, 0])
    assert r.verdict == "non-member"
    w = r.separating
    assert np.real(w @ np.array([-1, 0])) < 0
    assert np.linalg.eigvalsh(gram_of_functional(om(PW, w)))[0] > -1e-6
    assert positive_cone_membership(PW, [0, 0]).verdict == "member"
    assert positive_cone_membership(PW, [1j, 1]).verdict == "non-member"


def test_cone_boundary_of_dual_numbers():
    # (0, 1) = eps is a limit of sums of squares but never one itself
    r = positive_cone_membership(NIL, [0, 1])
    assert r.verdict == "member" and r.closure_only


# sufficiency, full representability, condition (P) ---------------------------------
def test_sufficiency_examples():
    assert sufficiency_check(PW, coordinate_family(PW)).sufficient
    r = sufficiency_check(PW, [om(PW, [1, 0])])
    assert not r.sufficient
    w = r.witness / np.abs(r.witness).max()
    assert np.allclose(np.abs(w), [0, 1], atol=1e-6)
    assert not sufficiency_check(PW, []).sufficient


def test_full_representability():
    assert fully_representable_check(PW).fully_representable
    assert fully_representable_check(make_lp_pair(3, 1).pair).fully_representable
    assert not fully_representable_check(NIL).fully_representable
    assert not fully_representable_check(PW, family=[]).fully_representable


def test_condition_P_examples():
    assert condition_P_check(PW, coordinate_family(PW)).holds
    r = condition_P_check(PW, [])
    assert not r.holds
    assert any(np.allclose(c["a"], -PW.unit) for c in r.counterexamples)
    r = condition_P_check(PW, [om(PW, [1, 0])])
    assert not r.holds and r.counterexamples
    for c in r.counterexamples:
        assert np.real(c["a"][0]) >= -1e-8 and np.real(c["a"][1]) < 0
    assert condition_P_check(NIL, representable_family(NIL)[0]).holds


# semisimplicity ---------------------------------------------------------------------
def test_semisimple_examples():
    B = bundled_by_label()
    assert semisimple_check(B["scalar"]).semisimple
    r = semisimple_check(PW)
    assert r.semisimple and r.min_eigenvalue > 0
    r = semisimple_check(NIL)
    assert r.verdict == "not-semisimple"
    k = r.kernel[:, 0]
    assert abs(k[0]) < 1e-8 and abs(k[1]) > 0.5
    verdict, K, _ = semisimple_bruteforce(NIL)
    assert verdict == "not-semisimple"


SMALL = [q for q in bundled_suite() + [random_star_pair(s) for s in range(8)] if q.dim <= 3]


@pytest.mark.parametrize("q", SMALL, ids=lambda q: q.label)
def test_semisimple_matches_bruteforce(q):
    assert semisimple_bruteforce(q)[0] == semisimple_check(q).verdict


def test_interior_form_is_admissible():
    for q in bundled_suite():
        r = semisimple_check(q)
        S = r.interior_form.matrix
        assert np.linalg.eigvalsh((S + S.conj().T) / 2)[0] >= -1e-9
        assert r.interior_form.hermitian_residual < 1e-9


# refinement closure -----------------------------------------------------------------
def test_closure_of_linear_function():
    fam = refinement_family(2, (2, 4, 8, 16, 32, 64))
    r = closure_of_form(fam, lambda t: t)
    assert r.converged
    assert r.limit == pytest.approx(1 / 3, abs=1e-3)
    # midpoint quadrature of t^2 on n cells misses 1/3 by exactly 1/(12 n^2)
    for n, v in zip(r.levels, r.values):
        assert v == pytest.approx(1 / 3 - 1 / (12 * n * n), abs=1e-12)


def test_closure_of_constant():
    fam = refinement_family(2, (2, 4, 8))
    r = closure_of_form(fam, lambda t: np.full_like(t, 3.0))
    assert np.allclose(r.values, 9.0)
