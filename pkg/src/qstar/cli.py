"""Command-line driver.

Exit codes: 0 pass, 1 assertion failure, 2 input error, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import List

import numpy as np

from .algebra import QuasiPair, UnitNormWarning
from .bilinear import DEFAULT_SEED

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SUITES = ("construction", "representability", "ss", "fullrep", "lp")


class InputError(Exception):
    pass


# serialization -----------------------------------------------------------------
def canon(obj):
    """JSON-ready copy with floats at 12 significant digits and complex as [re, im]."""
    if isinstance(obj, dict):
        return {str(k): canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canon(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return canon(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [canon(float(np.real(obj))), canon(float(np.imag(obj)))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        x = float(f"{x:.12g}")
        return 0.0 if x == 0 else x
    return obj


def dumps(obj) -> str:
    return json.dumps(canon(obj), sort_keys=True, indent=2) + "\n"


# input parsing -----------------------------------------------------------------
def _read_json(text_or_path: str):
    try:
        if os.path.exists(text_or_path):
            with open(text_or_path) as fh:
                return json.load(fh)
        return json.loads(text_or_path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {text_or_path!r}: {exc}") from exc


def _array(x, ndim: int) -> np.ndarray:
    """Real nested lists, or [re, im] pairs one level deeper."""
    try:
        a = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a numeric array: {exc}") from exc
    if a.ndim == ndim:
        return a.astype(complex)
    if a.ndim == ndim + 1 and a.shape[-1] == 2:
        return a[..., 0] + 1j * a[..., 1]
    raise InputError(f"expected a {ndim}-dimensional array (optionally of [re, im] pairs)")


def load_instance(path: str) -> QuasiPair:
    d = _read_json(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnitNormWarning)
            return QuasiPair.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance {path!r}: {exc}") from exc


def load_tensor(spec: str, n: int, m: int) -> np.ndarray:
    d = _read_json(spec)
    if isinstance(d, dict):
        if "x" in d and "y" in d:
            M = np.outer(_array(d["x"], 1), _array(d["y"], 1))
        elif "matrix" in d:
            M = _array(d["matrix"], 2)
        else:
            raise InputError("tensor JSON needs 'matrix' or 'x' and 'y'")
    else:
        M = _array(d, 2)
    if M.shape != (n, m):
        raise InputError(f"tensor has shape {M.shape}, expected {(n, m)}")
    return M


def load_vector(spec: str, n: int) -> np.ndarray:
    v = _array(_read_json(spec), 1)
    if v.shape != (n,):
        raise InputError(f"vector has length {v.size}, expected {n}")
    return v


# reports -----------------------------------------------------------------------
def entry(suite, instance, check, verdict, value=0.0, expected=False, detail=""):
    return {"suite": suite, "instance": instance, "check": check, "verdict": verdict,
            "value": float(value), "expected": bool(expected), "detail": detail}


def _ok(cond: bool) -> str:
    return "pass" if cond else "fail"


def exit_code(entries) -> int:
    verdicts = [e["verdict"] for e in entries]
    if "fail" in verdicts:
        return EXIT_FAIL
    if "inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    rows = report.get("results", [])
    cols = ["suite", "instance", "check", "verdict", "value", "expected"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in canon(rows):
            w.writerow([r.get(c, "") for c in cols])
        return buf.getvalue()
    table = [cols] + [[str(r.get(c, "")) for c in cols] for r in canon(rows)]
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = ["  ".join(v.ljust(wd) for v, wd in zip(row, widths)).rstrip() for row in table]
    if "summary" in report:
        lines.append("")
        lines.append(" ".join(f"{k}={v}" for k, v in sorted(canon(report["summary"]).items())))
    return "\n".join(lines) + "\n"


def emit(text: str, out: str = None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# verification suites -----------------------------------------------------------
TENSOR_CASES = [
    ("lp-grid-n2-p2", "lp-grid-n3-p2"),
    ("lp-grid-n3-p1", "lp-grid-n2-p2"),
    ("matrix-2-hs", "lp-grid-n2-p2"),
    ("nilpotent-2", "cyclic-3-l2"),
    ("scalar", "matrix-2-hs"),
]
SS_CASES = [
    ("lp-grid-n2-p2", "lp-grid-n2-p2"),
    ("lp-grid-n3-p1", "lp-grid-n2-p2"),
    ("matrix-2-hs", "lp-grid-n2-p2"),
    ("cyclic-3-l2", "lp-grid-n2-p2"),
    ("nilpotent-2", "lp-grid-n2-p2"),
    ("scalar", "scalar"),
]
FULLREP_CASES = [
    ("lp-grid-n2-p2", "lp-grid-n2-p2", "coordinates"),
    ("lp-grid-n3-p1", "lp-grid-n2-p2", "coordinates"),
    ("nilpotent-2", "lp-grid-n2-p2", "generated"),
    ("scalar", "scalar", "generated"),
    ("lp-grid-n2-p2", "lp-grid-n2-p2", "insufficient"),
]
PHI_CASES = [("lp-grid-n2-p2", "lp-grid-n3-p2"), ("lp-grid-n3-p1", "lp-grid-n2-p2"), ("matrix-2-hs", "scalar")]


def _applicable(tag, P, Q):
    return tag != "h" or (P.normA.is_inner_product and Q.normA.is_inner_product)


def _suite_tasks(suite: str, labels: List[str]):
    if suite in ("construction", "representability"):
        return [(suite, ("pair", lab)) for lab in labels] + (
            [(suite, ("tensor",) + c) for c in TENSOR_CASES] if suite == "construction" else [])
    if suite == "ss":
        return [(suite, ("pair", lab)) for lab in labels] + [(suite, ("tensor",) + c) for c in SS_CASES]
    if suite == "fullrep":
        return [(suite, ("tensor",) + c) for c in FULLREP_CASES] + [(suite, ("phi",) + c) for c in PHI_CASES]
    if suite == "lp":
        return [(suite, ("l1", n)) for n in (2, 4, 8)] + [(suite, ("l2", n)) for n in (2, 4, 8)] + \
            [(suite, ("grid", 0))]
    raise InputError(f"unknown suite {suite!r}")


def _run_construction(case, pairs, seed, tags):
    from .tensor_construction import (build_tensor_pair, combined_a0_norm_consistency,
                                      verify_action_factorization, verify_construction,
                                      verify_involution_isometry)
    from .validation import validate_quasi_pair
    out = []
    if case[0] == "pair":
        q = pairs[case[1]]
        v = validate_quasi_pair(q, samples=8, seed=seed)
        worst = max((e.residual for e in v.entries if e.level == "error"), default=0.0)
        out.append(entry("construction", q.label, "axioms", _ok(v.passed), worst, detail=",".join(v.failed())))
        return out
    P, Q = pairs[case[1]], pairs[case[2]]
    for tag in tags:
        if not _applicable(tag, P, Q):
            continue
        tp = build_tensor_pair(P, Q, tag)
        lab = tp.combined.label
        for name, rep in (("kronecker-structure", verify_construction(tp, seed=seed)),
                          ("action-factorization", verify_action_factorization(tp, seed=seed)),
                          ("involution-isometry", verify_involution_isometry(tp, trials=4, seed=seed)),
                          ("a0-norm-consistency", combined_a0_norm_consistency(tp, trials=4, seed=seed))):
            worst = max(rep.residuals.values(), default=0.0)
            verdict = _ok(rep.passed)
            if verdict == "pass" and rep.inconclusive:
                verdict = "inconclusive"
            out.append(entry("construction", lab, name, verdict, worst))
    return out


def _run_representability(case, pairs, seed, tol):
    from .representability import (FunctionalModel, check_representable, compose_functional, gns,
                                   gram_of_functional, positive_cone_membership, representable_family)
    q = pairs[case[1]]
    out = []
    fam, _ = representable_family(q, seed=seed)
    worst_repro = worst_star = 0.0
    rank_ok = True
    for om in fam:
        g = gns(om)
        r = g.residuals
        worst_repro = max(worst_repro, r["reproduction"], r["form"], r["unit_form"])
        worst_star = max(worst_star, r["star"], r["multiplicative"])
        rank_ok &= r["cyclic_rank"] == g.hilbert_dim
    out.append(entry("representability", q.label, "gns-reproduction", _ok(worst_repro <= 1e-8), worst_repro))
    out.append(entry("representability", q.label, "gns-star", _ok(worst_star <= 1e-10), worst_star))
    out.append(entry("representability", q.label, "gns-cyclic-rank", _ok(rank_ok), len(fam)))
    # a rejected functional must carry an independently verifiable certificate
    bad = FunctionalModel(q, -fam[0].coeffs, "negated") if fam else None
    if bad is not None and np.any(gram_of_functional(bad)):
        rep = check_representable(bad)
        G = gram_of_functional(bad)
        ok = False
        if "negative_eigenvector" in rep.certificates:
            v = rep.certificates["negative_eigenvector"]
            ok = float(np.real(np.vdot(v, G @ v))) < 0
        elif "range_violation" in rep.certificates:
            ok = rep.certificates["range_violation"]["residual"] > 0
        out.append(entry("representability", q.label, "rejection-certificate",
                         _ok(not rep.representable and ok), rep.min_eigenvalue))
    rng = np.random.default_rng(seed)
    comp = all(check_representable(compose_functional(om, x), tol=1e-8).representable
               for om in fam[:3] for x in rng.standard_normal((2, q.dim)) + 1j * rng.standard_normal((2, q.dim)))
    out.append(entry("representability", q.label, "composed-functionals", _ok(comp), 0.0))
    if q.unit is not None:
        cm = positive_cone_membership(q, q.unit)
        cn = positive_cone_membership(q, -q.unit)
        verdict = "inconclusive" if "unknown" in (cm.verdict, cn.verdict) else \
            _ok(cm.verdict == "member" and cn.verdict == "non-member")
        out.append(entry("representability", q.label, "cone-unit", verdict,
                         cn.separation_value if cn.separation_value is not None else 0.0))
    return out


def _run_ss(case, pairs, seed, tol, tags):
    from .representability import representable_family, semisimple_bruteforce, semisimple_check
    from .tensor_reps import (RepresentationModel, direct_sum, faithfulness_check,
                              theorem_SS_harness)
    from .representability import gns
    out = []
    if case[0] == "pair":
        q = pairs[case[1]]
        s = semisimple_check(q, seed=seed)
        expected_ss = q.meta.get("model") != "nilpotent"
        if s.verdict == "unknown":
            v = "inconclusive"
        elif s.semisimple == expected_ss:
            v = "pass" if expected_ss else "expected-fail"
        else:
            v = "fail"
        out.append(entry("ss", q.label, "semisimple", v, s.min_eigenvalue, expected=not expected_ss))
        if q.dim <= 3:
            bf, _, _ = semisimple_bruteforce(q)
            out.append(entry("ss", q.label, "bruteforce-agreement", _ok(bf == s.verdict), 0.0,
                             expected=not expected_ss))
        fam, _ = representable_family(q, seed=seed)
        reps = [RepresentationModel.from_gns(gns(om)) for om in fam]
        faithful = faithfulness_check(direct_sum(reps)).faithful if reps else q.dim == 0
        out.append(entry("ss", q.label, "faithfulness-matches", _ok(faithful == s.semisimple), 0.0))
        return out
    P, Q = pairs[case[1]], pairs[case[2]]
    for tag in tags:
        if not _applicable(tag, P, Q):
            continue
        rep = theorem_SS_harness(P, Q, tag, seed=seed)
        for r in rep.rows:
            out.append(entry("ss", r.instance, f"SS {r.direction}", _verdict(r.verdict), r.margin,
                             detail=f"{r.verdict};{r.hypothesis}"))
    return out


def _verdict(v: str) -> str:
    return v if v in ("fail", "inconclusive") else "pass"


def _run_fullrep(case, pairs, seed, tol, tags):
    from .representability import FunctionalModel, coordinate_family
    from .tensor_construction import build_tensor_pair
    from .tensor_reps import full_rep_transfer_harness, phi_omega_build, tensor_functional
    out = []
    if case[0] == "phi":
        P, Q = pairs[case[1]], pairs[case[2]]
        for tag in ("gamma", "h"):
            if not _applicable(tag, P, Q):
                continue
            tp = build_tensor_pair(P, Q, tag)
            om = tensor_functional(FunctionalModel(P, np.ones(P.dim) / P.dim, "uniform"),
                                   FunctionalModel(Q, np.ones(Q.dim) / Q.dim, "uniform"), tp)
            ph = phi_omega_build(om, tp, seed=seed)
            rng = np.random.default_rng(seed)
            worst = -np.inf
            for c in rng.standard_normal((200, tp.combined.dim)) + 1j * rng.standard_normal((200, tp.combined.dim)):
                nc = tp.norm(c, seed=seed).value
                bound = ph.gamma_min ** 2 * nc ** 2
                worst = max(worst, (np.real(ph.value(c)) - bound) / max(1.0, bound))
            lab = tp.combined.label
            out.append(entry("fullrep", lab, "phi-omega-continuity", _ok(worst <= 1e-8), worst))
            out.append(entry("fullrep", lab, "phi-omega-restriction", _ok(ph.restriction_residual <= 1e-10),
                             ph.restriction_residual))
        return out
    _, a, b, mode = case
    P, Q = pairs[a], pairs[b]
    fams = None
    if mode == "coordinates":
        fams = (coordinate_family(P), coordinate_family(Q))
    elif mode == "insufficient":
        fams = ([FunctionalModel(P, np.eye(P.dim)[0], "coordinate[0]")], coordinate_family(Q))
    rep = full_rep_transfer_harness(P, Q, "gamma", seed=seed, families=fams)
    for r in rep.rows:
        out.append(entry("fullrep", f"{r.instance}[{mode}]", f"full-rep {r.direction}", _verdict(r.verdict),
                         r.margin, detail=f"{r.verdict};{r.hypothesis}"))
    if mode == "insufficient":
        # failure must propagate from the factor to the tensor product
        d = rep.detail
        out.append(entry("fullrep", f"{rep.rows[0].instance}[{mode}]", "failure-propagates",
                         _ok(not d["left"] and not d["tensor"]), 0.0, expected=True))
    return out


def _run_lp(case, seed):
    from .lp_models import (make_lp_pair, refinement_family, verify_l1_gamma_identity,
                            verify_l2_h_identity)
    from .representability import closure_of_form, semisimple_check
    kind, n = case
    out = []
    if kind == "l1":
        r = verify_l1_gamma_identity(n, n, trials=20, seed=seed)
        out.append(entry("lp", f"L1({n})xL1({n})", "gamma-identity", _ok(r.passed), r.max_deviation))
    elif kind == "l2":
        r = verify_l2_h_identity(n, n, trials=20, seed=seed)
        out.append(entry("lp", f"L2({n})xL2({n})", "h-identity", _ok(r.passed), r.max_deviation))
    else:
        fam = refinement_family(2, (2, 4, 8, 16, 32, 64))
        r = closure_of_form(fam, lambda t: t)
        out.append(entry("lp", "refinement-p2", "closure-limit", _ok(r.converged and abs(r.limit - 1 / 3) <= 1e-3),
                         abs(r.limit - 1 / 3)))
        g = make_lp_pair(4, 2)
        out.append(entry("lp", g.pair.label, "hilbert-semisimple", _ok(semisimple_check(g.pair).semisimple), 0.0))
    return out


def run_task(task, seed, tol, tags):
    suite, case = task
    from .instances import bundled_by_label
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pairs = bundled_by_label()
        if suite == "construction":
            return _run_construction(case, pairs, seed, tags)
        if suite == "representability":
            return _run_representability(case, pairs, seed, tol)
        if suite == "ss":
            return _run_ss(case, pairs, seed, tol, tags)
        if suite == "fullrep":
            return _run_fullrep(case, pairs, seed, tol, tags)
        return _run_lp(case, seed)


def run_verify(suites, seed=DEFAULT_SEED, tol=1e-8, tags=("lambda", "gamma", "h"), jobs=1, extra=()):
    """Run suites over the bundled instances (plus extra pairs for the pair-level checks)."""
    from .instances import bundled_by_label
    labels = sorted(bundled_by_label())
    tasks = []
    for s in suites:
        tasks += _suite_tasks(s, labels)
    t0 = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(run_task, tasks, [seed] * len(tasks), [tol] * len(tasks),
                                [tuple(tags)] * len(tasks)))
    else:
        parts = [run_task(t, seed, tol, tuple(tags)) for t in tasks]
    results = [e for p in parts for e in p]
    for q in extra:
        results += _extra_pair_checks(q, seed, suites)
    results.sort(key=lambda e: (e["suite"], e["instance"], e["check"]))
    counts = {}
    for e in results:
        counts[e["verdict"]] = counts.get(e["verdict"], 0) + 1
    report = {"schema": SCHEMA, "command": "verify", "seed": int(seed), "suites": list(suites),
              "crossnorms": list(tags), "results": results, "summary": counts}
    return report, time.perf_counter() - t0


def _extra_pair_checks(q: QuasiPair, seed, suites):
    from .representability import semisimple_check
    from .validation import validate_quasi_pair
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if "construction" in suites:
            v = validate_quasi_pair(q, samples=8, seed=seed)
            out.append(entry("construction", q.label, "axioms", _ok(v.passed), 0.0, detail=",".join(v.failed())))
        if "ss" in suites:
            s = semisimple_check(q, seed=seed)
            out.append(entry("ss", q.label, "semisimple", "inconclusive" if s.verdict == "unknown" else "pass",
                             s.min_eigenvalue, detail=s.verdict))
    return out


# commands ----------------------------------------------------------------------
def cmd_crossnorm(args):
    from .crossnorms import (TensorElement, check_compatibility_sandwich, hilbert_norm, injective_norm,
                             projective_norm)
    P = load_instance(args.instance)
    Q = load_instance(args.right) if args.right else P
    if args.z is None:
        raise InputError("--z is required (matrix JSON, {'matrix': ...} or {'x': ..., 'y': ...})")
    M = load_tensor(args.z, P.dim, Q.dim)
    z = TensorElement(M, P.normA, Q.normA)
    lam = injective_norm(z, seed=args.seed)
    gam = projective_norm(z, seed=args.seed)
    out = {"schema": SCHEMA, "command": "crossnorm", "left": P.label, "right": Q.label,
           "lambda": lam.to_json(), "gamma": gam.to_json()}
    if P.normA.is_inner_product and Q.normA.is_inner_product:
        h = hilbert_norm(z)
        out["h"] = {"value": h, "lower": h, "upper": h, "converged": True}
        sw = check_compatibility_sandwich(z, hilbert_norm, tol=args.tol, seed=args.seed)
        out["sandwich"] = {"candidate": "h", "passed": sw.passed, "violation": sw.violation}
    else:
        out["h"] = None
        out["sandwich"] = {"candidate": "gamma", "passed": bool(lam.lower <= gam.upper + args.tol)}
    code = EXIT_PASS
    if not out["sandwich"]["passed"]:
        code = EXIT_FAIL
    elif not (lam.converged and gam.converged):
        code = EXIT_INCONCLUSIVE
    rows = [{"suite": "crossnorm", "instance": f"{P.label}(x){Q.label}", "check": k,
             "verdict": "pass" if code == EXIT_PASS else ("fail" if code == EXIT_FAIL else "inconclusive"),
             "value": out[k]["value"]} for k in ("lambda", "gamma", "h") if out.get(k)]
    return out, rows, code


def cmd_gns(args):
    from .representability import FunctionalModel, NotRepresentableError, check_representable, gns
    q = load_instance(args.instance)
    if args.omega is None:
        raise InputError("--omega is required")
    om = FunctionalModel(q, load_vector(args.omega, q.dim), "cli")
    rep = check_representable(om)
    out = {"schema": SCHEMA, "command": "gns", "instance": q.label, "representable": rep.representable,
           "conditions": {"L1": rep.l1, "L2": rep.l2, "L3": rep.l3}, "gamma": rep.gamma}
    try:
        g = gns(om)
    except NotRepresentableError as exc:
        out["error"] = str(exc)
        out["certificates"] = {k: v for k, v in rep.certificates.items()}
        return out, [{"suite": "gns", "instance": q.label, "check": "representable", "verdict": "fail",
                      "value": rep.min_eigenvalue}], EXIT_FAIL
    out.update({"hilbert_dim": g.hilbert_dim, "residuals": g.residuals, "cyclic_vector": g.cyclic_vector,
                "representation": g.rep, "cutoff_sensitivity": g.cutoff_sensitivity, "unitized": g.unitized})
    ok = g.residuals["reproduction"] <= 1e-8 and g.residuals["star"] <= 1e-10
    return out, [{"suite": "gns", "instance": q.label, "check": "residuals", "verdict": _ok(ok),
                  "value": g.residuals["reproduction"]}], EXIT_PASS if ok else EXIT_FAIL


def cmd_semisimple(args):
    from .representability import semisimple_bruteforce, semisimple_check
    q = load_instance(args.instance)
    s = semisimple_check(q, tol=args.tol, seed=args.seed)
    out = {"schema": SCHEMA, "command": "semisimple", "instance": q.label, "verdict": s.verdict,
           "min_eigenvalue": s.min_eigenvalue, "kernel": s.kernel, "invariant_dim": s.invariant_dim,
           "interior_form": s.interior_form.matrix if s.interior_form is not None else None}
    if q.dim <= 3:
        out["bruteforce"] = semisimple_bruteforce(q)[0]
    code = EXIT_INCONCLUSIVE if s.verdict == "unknown" else EXIT_PASS
    return out, [{"suite": "semisimple", "instance": q.label, "check": s.verdict,
                  "verdict": "inconclusive" if code else "pass", "value": s.min_eigenvalue}], code


def cmd_fullrep(args):
    from .representability import condition_P_check, fully_representable_check
    q = load_instance(args.instance)
    r = fully_representable_check(q, tol=args.tol, seed=args.seed)
    cp = condition_P_check(q, r.family, seed=args.seed)
    out = {"schema": SCHEMA, "command": "fullrep", "instance": q.label,
           "fully_representable": r.fully_representable, "sufficient": r.sufficiency.sufficient,
           "worst_margin": r.sufficiency.worst_margin, "family": r.provenance,
           "domains_automatic": r.domains_automatic, "condition_P": cp.holds,
           "condition_P_counterexamples": len(cp.counterexamples)}
    code = EXIT_INCONCLUSIVE if cp.inconclusive else EXIT_PASS
    return out, [{"suite": "fullrep", "instance": q.label, "check": "fully-representable",
                  "verdict": "inconclusive" if code else "pass", "value": r.sufficiency.worst_margin}], code


def cmd_generate(args):
    from .instances import generate_instance
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnitNormWarning)
            q = generate_instance(args.kind, seed=args.seed, n=args.n, p=args.p, dim=args.dim)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return q.to_json()


def cmd_verify(args):
    suites = SUITES if args.suite == "all" else (args.suite,)
    tags = (args.crossnorm,) if args.crossnorm else ("lambda", "gamma", "h")
    extra = [load_instance(p) for p in (args.instance or [])]
    report, elapsed = run_verify(suites, seed=args.seed, tol=args.tol, tags=tags, jobs=args.jobs, extra=extra)
    return report, exit_code(report["results"]), elapsed


# argument parsing ---------------------------------------------------------------
def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="random seed (QSTAR_SEED overrides)")
    common.add_argument("--tol", type=float, default=1e-8, help="verdict tolerance")
    common.add_argument("--crossnorm", choices=["lambda", "gamma", "h"], default=None)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    common.add_argument("--out", default=None, help="write the report to PATH")
    p = argparse.ArgumentParser(prog="qstar", description="Finite-dimensional quasi *-algebra workbench.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("crossnorm", parents=[common], help="lambda, gamma and h of a tensor")
    c.add_argument("instance")
    c.add_argument("--right", default=None, help="right factor instance (default: same as left)")
    c.add_argument("--z", default=None, help="tensor JSON or path")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    v.add_argument("--instance", action="append", help="extra instance file (repeatable)")
    g = sub.add_parser("generate", parents=[common], help="write a seeded instance")
    g.add_argument("kind", choices=["random-star-algebra", "lp-grid", "nilpotent", "hilbert"])
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--dim", type=int, default=None)
    n = sub.add_parser("gns", parents=[common], help="GNS construction of a functional")
    n.add_argument("instance")
    n.add_argument("--omega", default=None, help="functional coefficients JSON or path")
    s = sub.add_parser("semisimple", parents=[common], help="*-semisimplicity check")
    s.add_argument("instance")
    f = sub.add_parser("fullrep", parents=[common], help="full representability check")
    f.add_argument("instance")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_PASS
    env = os.environ.get("QSTAR_SEED")
    if env:
        try:
            args.seed = int(env, 0)
        except ValueError:
            sys.stderr.write(f"invalid QSTAR_SEED {env!r}\n")
            return EXIT_INPUT
    try:
        if args.command == "generate":
            emit(dumps(cmd_generate(args)), args.out)
            return EXIT_PASS
        if args.command == "verify":
            report, code, elapsed = cmd_verify(args)
            emit(render(report, args.format), args.out)
            sys.stderr.write(f"verify: {report['summary']} in {elapsed:.1f}s\n")
            return code
        handler = {"crossnorm": cmd_crossnorm, "gns": cmd_gns, "semisimple": cmd_semisimple,
                   "fullrep": cmd_fullrep}[args.command]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnitNormWarning)
            out, rows, code = handler(args)
        emit(dumps(out) if args.format == "json" else render({"results": rows}, args.format), args.out)
        return code
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
