import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cvec
from qstar.instances import bundled_by_label, nilpotent_pair
from qstar.lp_models import make_lp_pair
from qstar.representability import (FormModel, FunctionalModel, coordinate_family, gns, gram_of_functional,
                                    representable_family, semisimple_check)
from qstar.tensor_construction import build_tensor_pair
from qstar.tensor_reps import (HarnessRow, RepresentationModel, direct_sum, faithfulness_check, form_membership,
                               full_rep_transfer_harness, phi_omega_build, restrict_functional_and_form,
                               restrict_representation, tensor_form, tensor_functional, tensor_representation,
                               theorem_SS_harness, unitary_equivalence_probe, vector_functionals_from_rep)

B = bundled_by_label()
PW = make_lp_pair(2, 2).pair
SEEDS = st.integers(0, 2 ** 32 - 1)


def om(pair, c):
    return FunctionalModel(pair, np.asarray(c, dtype=complex), "test")


def rep_of(pair, c):
    return RepresentationModel.from_gns(gns(om(pair, c)))


# representations --------------------------------------------------------------
def test_restriction_of_gns_on_pointwise():
    tp = build_tensor_pair(PW, PW, "h")
    Om = tensor_functional(om(PW, [1, 1]), om(PW, [1, 1]), tp)
    pi = RepresentationModel.from_gns(gns(Om))
    assert pi.is_valid()
    p1, p2, r = restrict_representation(pi, tp)
    assert r.passed and r.commutation < 1e-12 and r.factorization < 1e-12
    a = np.array([2.0, -1j])
    ev = np.sort_complex(np.linalg.eigvals(p1.pi(a)))
    assert np.allclose(ev, np.sort_complex(np.repeat(a, 2)))


def test_restriction_inverts_tensoring():
    tp = build_tensor_pair(B["matrix-2-hs"], PW, "gamma")
    fam, _ = representable_family(B["matrix-2-hs"])
    r1 = RepresentationModel.from_gns(gns(fam[0]))
    r2 = rep_of(PW, [1, 1])
    pi = tensor_representation(r1, r2, tp)
    assert pi.is_valid()
    p1, p2, rep = restrict_representation(pi, tp)
    assert rep.passed
    I1, I2 = np.eye(r1.hilbert_dim), np.eye(r2.hilbert_dim)
    for i in range(r1.pair.dim):
        assert np.allclose(p1.ops[i], np.kron(r1.ops[i], I2))
    for j in range(r2.pair.dim):
        assert np.allclose(p2.ops[j], np.kron(I1, r2.ops[j]))


def test_tensor_of_diagonal_reps_is_diagonal():
    tp = build_tensor_pair(PW, make_lp_pair(3, 2).pair, "h")
    pi = tensor_representation(rep_of(PW, [1, 1]), rep_of(tp.right, [1, 1, 1]), tp)
    for k, P in enumerate(pi.ops):
        assert np.allclose(P, np.diag(np.diag(P)))
    # pointwise tensor pointwise is pointwise on the product grid
    assert np.allclose(np.sort(np.diag(pi.ops.sum(0)).real), np.ones(6))


def test_vector_functionals():
    tp = build_tensor_pair(PW, PW, "gamma")
    w1, w2 = om(PW, [1, 1]), om(PW, [0.5, 0.5])
    data = gns(tensor_functional(w1, w2, tp))
    pi = RepresentationModel.from_gns(data)
    o1, o2 = vector_functionals_from_rep(pi, data.cyclic_vector, tp)
    # Omega(a (x) e) = omega_1(a) omega_2(e)
    assert np.allclose(o1.coeffs, w1.coeffs * w2(PW.unit))
    assert np.allclose(o2.coeffs, w2.coeffs * w1(PW.unit))
    z1, z2 = vector_functionals_from_rep(pi, np.zeros(pi.hilbert_dim), tp)
    assert not np.any(z1.coeffs) and not np.any(z2.coeffs)


def test_vector_functional_of_basis_vector_is_coordinate():
    tp = build_tensor_pair(PW, PW, "h")
    pi = tensor_representation(rep_of(PW, [1, 1]), rep_of(PW, [1, 1]), tp)
    # the GNS space of the pointwise algebra diagonalizes it; each basis vector picks a coordinate
    seen = set()
    for k in range(pi.hilbert_dim):
        o1, o2 = vector_functionals_from_rep(pi, np.eye(pi.hilbert_dim)[k], tp)
        for o in (o1, o2):
            assert np.isclose(np.abs(o.coeffs).sum(), 1) and np.isclose(np.abs(o.coeffs).max(), 1)
        seen.add((int(np.argmax(np.abs(o1.coeffs))), int(np.argmax(np.abs(o2.coeffs)))))
    assert seen == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_faithfulness():
    M = B["matrix-2-hs"]
    ident = RepresentationModel(M, np.eye(4).reshape(4, 2, 2), "C^2")
    assert ident.is_valid() and faithfulness_check(ident).faithful
    first = RepresentationModel(PW, np.array([[[1.0]], [[0.0]]]), "C")
    assert first.is_valid()
    r = faithfulness_check(first)
    assert not r.faithful and r.rank == 1
    k = r.kernel[:, 0]
    assert abs(k[0]) < 1e-12 and abs(k[1]) == pytest.approx(1)


@pytest.mark.parametrize("label", ["lp-grid-n3-p2", "matrix-2-hs", "cyclic-3-l2", "nilpotent-2"])
def test_direct_sum_of_gns_matches_semisimple(label):
    q = B[label]
    fam, _ = representable_family(q)
    pi = direct_sum([RepresentationModel.from_gns(gns(f), q) for f in fam])
    assert pi.is_valid()
    assert faithfulness_check(pi, tol=1e-8).faithful == semisimple_check(q).semisimple


def test_unitary_equivalence_of_product_gns():
    tp = build_tensor_pair(PW, PW, "h")
    w1, w2 = om(PW, [1, 1]), om(PW, [1, 0.5])
    g1, g2 = gns(w1), gns(w2)
    gT = gns(tensor_functional(w1, w2, tp))
    prod = tensor_representation(RepresentationModel.from_gns(g1), RepresentationModel.from_gns(g2), tp)
    r = unitary_equivalence_probe(RepresentationModel.from_gns(gT), gT.cyclic_vector, prod,
                                  np.kron(g1.cyclic_vector, g2.cyclic_vector))
    assert r["unitary"], r
    r = unitary_equivalence_probe(rep_of(PW, [1, 0]), [1.0], prod, np.ones(4))
    assert not r["same_dimension"] and not r["unitary"]


# functionals and forms ----------------------------------------------------------
def test_tensor_functional_values():
    tp = build_tensor_pair(PW, PW, "gamma")
    W = tensor_functional(om(PW, [1, 1]), om(PW, [1, 1]), tp)
    assert np.allclose(W.coeffs, [1, 1, 1, 1])


@pytest.mark.parametrize("a,b", [("matrix-2-hs", "cyclic-3-l2"), ("lp-grid-n2-p2", "nilpotent-2")])
def test_gram_of_tensor_functional_factorizes(a, b):
    P, Q = B[a], B[b]
    tp = build_tensor_pair(P, Q, "gamma")
    for w1 in representable_family(P)[0][:2]:
        for w2 in representable_family(Q)[0][:2]:
            G = gram_of_functional(tensor_functional(w1, w2, tp))
            K = np.kron(gram_of_functional(w1), gram_of_functional(w2))
            assert np.abs(G - K).max() < 1e-12


def test_tensor_form_of_identity_forms():
    tp = build_tensor_pair(PW, PW, "h")
    phi = FormModel(PW, np.eye(2) / 2, 1.0, "half-identity")
    assert form_membership(phi)["member"]
    r = tensor_form(phi, phi, tp)
    assert r.exact and r.raw_bound == pytest.approx(1)
    assert np.allclose(r.form.matrix, np.eye(4) / 4)
    assert r.psd_min > 0 and r.invariance < 1e-12
    assert form_membership(r.form)["member"]


def test_tensor_form_gamma_bound_is_product():
    tp = build_tensor_pair(PW, PW, "gamma")
    phi = FormModel(PW, np.diag([1.0, 0.0]), 1.0, "first")
    r = tensor_form(phi, phi, tp)
    # sup |x_1|^2 over the grid l2 ball is 2 on each factor
    assert r.exact and r.raw_bound == pytest.approx(4)


def test_tensor_form_zero_factor():
    tp = build_tensor_pair(PW, PW, "h")
    phi = FormModel(PW, np.eye(2) / 2)
    with pytest.raises(ValueError):
        tensor_form(phi, FormModel(PW, np.zeros((2, 2))), tp)


def test_restrict_functional_and_form():
    P, Q = B["matrix-2-hs"], PW
    tp = build_tensor_pair(P, Q, "gamma")
    w1, w2 = representable_family(P)[0][0], om(Q, [1, 0.5])
    S1, S2 = gram_of_functional(w1), gram_of_functional(w2)
    Phi = FormModel(tp.combined, np.kron(S1, S2), 1.0)
    o1, o2, f1, f2 = restrict_functional_and_form(tensor_functional(w1, w2, tp), Phi, tp)
    assert np.allclose(o1.coeffs, w1.coeffs * w2(Q.unit))
    assert np.allclose(o2.coeffs, w2.coeffs * w1(P.unit))
    assert np.allclose(f1.matrix, S1 * np.real(np.vdot(Q.unit, S2 @ Q.unit)))
    assert np.allclose(f2.matrix, S2 * np.real(np.vdot(P.unit, S1 @ P.unit)))
    *_, none1, none2 = restrict_functional_and_form(tensor_functional(w1, w2, tp), None, tp)
    assert none1 is None and none2 is None


# phi_Omega -------------------------------------------------------------------------
def test_phi_omega_on_pointwise():
    tp = build_tensor_pair(PW, PW, "h")
    F = phi_omega_build(tensor_functional(om(PW, [1, 1]), om(PW, [1, 1]), tp), tp)
    assert F.restriction_residual < 1e-10
    assert np.allclose(F.matrix, np.eye(4), atol=1e-10)
    # the grid l2 norm on 4 cells is |c| / 2, so sup phi(c, c) over its ball is 4
    assert F.gamma_exact and F.gamma_min == pytest.approx(2)
    c = np.array([1, 2j, -1, 0.5])
    assert F.norm(c) == pytest.approx(np.sqrt(5 / 4) * np.linalg.norm(c))
    assert F.norm(np.zeros(4)) == 0.0


@settings(max_examples=5, deadline=None)
@given(SEEDS)
def test_phi_omega_bound(seed):
    P, Q = B["matrix-2-hs"], PW
    tp = build_tensor_pair(P, Q, "gamma")
    rng = np.random.default_rng(seed)
    Om = tensor_functional(representable_family(P)[0][0], om(Q, [1, 0.5]), tp)
    F = phi_omega_build(Om, tp)
    assert F.restriction_residual < 1e-10
    assert F.gamma_min <= F.gamma_upper + 1e-9
    for c in cvec(rng, 200, tp.combined.dim):
        nc = tp.norm(c).value
        assert np.real(F.value(c)) <= (F.gamma_upper * nc) ** 2 * (1 + 1e-6) + 1e-9
        assert F.norm(c) >= nc * (1 - 1e-12)


# harnesses ---------------------------------------------------------------------------
def verdicts(rep):
    return {r.direction: r.verdict for r in rep.rows}


@pytest.mark.parametrize("tag", ["gamma", "h"])
def test_ss_harness_pointwise(tag):
    r = theorem_SS_harness(PW, make_lp_pair(3, 2).pair, tag)
    assert verdicts(r) == {"(1)=>(2)": "pass", "(2)=>(1)": "pass"}
    assert r.passed and r.detail["witness_min_eigenvalue"] > 0


def test_ss_harness_nilpotent_is_vacuous():
    r = theorem_SS_harness(nilpotent_pair(2), PW, "gamma")
    assert r.detail["tensor"] == "not-semisimple" and r.detail["left"] == "not-semisimple"
    assert verdicts(r) == {"(1)=>(2)": "vacuous", "(2)=>(1)": "vacuous"}
    assert r.passed


def test_ss_harness_scalar():
    r = theorem_SS_harness(B["scalar"], B["scalar"], "lambda")
    assert verdicts(r) == {"(1)=>(2)": "pass", "(2)=>(1)": "pass"}
    assert {row.hypothesis for row in r.rows} == {"always", "empirical"}


def test_full_rep_harness_pointwise():
    r = full_rep_transfer_harness(PW, PW, "gamma", samples=60, families=(coordinate_family(PW),) * 2)
    assert verdicts(r) == {"tensor=>factors": "pass", "factor-failure=>tensor-failure": "vacuous",
                           "factors=>tensor": "pass"}
    assert r.detail["tensor"]


def test_full_rep_harness_insufficient_family():
    r = full_rep_transfer_harness(PW, PW, "gamma", samples=60, families=([om(PW, [1, 0])], coordinate_family(PW)))
    assert not r.detail["left"] and not r.detail["tensor"]
    v = verdicts(r)
    assert v["tensor=>factors"] == "vacuous"
    assert v["factor-failure=>tensor-failure"] == "pass"
    assert v["factors=>tensor"] == "skipped"
    assert r.passed


def test_full_rep_harness_scalar():
    r = full_rep_transfer_harness(B["scalar"], B["scalar"], "gamma", samples=20)
    assert all(v in ("pass", "vacuous") for v in verdicts(r).values())


def test_harness_row_json():
    row = HarnessRow("x", "SS", "(1)=>(2)", "pass", 0.5, 12.0, "always")
    assert "runtime_ms" not in row.to_json()
    assert row.to_json(with_runtime=True)["runtime_ms"] == 12.0
