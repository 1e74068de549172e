"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected into a summary section at the end of any pytest run.
"""

import json
import random
import time

import pytest

from drazinlab.campaign import strip_timing
from drazinlab.cli import main
from drazinlab.drazin import drazin_inverse, index_of, verify_drazin_axioms
from drazinlab.errors import Infeasible
from drazinlab.fields import GF, QQ, ComplexFloat
from drazinlab.identities import (
    Quadruple,
    check_condition,
    cline_full,
    condition_hierarchy_check,
    jacobson_gdrazin,
    jacobson_group,
    jacobson_proof_obligations,
)
from drazinlab.linalg import Matrix, is_nilpotent, residual
from drazinlab.quadgen import GenSpec, generate

MOSIC_TRIALS = 1000
GROUP_MIN = 50

HIERARCHY_SEEN = {"instances": 0, "violations": []}


def note_hierarchy(q):
    rep = condition_hierarchy_check(q)
    HIERARCHY_SEEN["instances"] += 1
    if not rep.ok:
        HIERARCHY_SEEN["violations"].append(rep.violations)


def mosic_instances(field, trials, dims, entry_bound=3):
    """``trials`` Mosić quadruples with dims cycling through ``dims``; infeasible seeds are skipped."""
    out, seed = [], 0
    while len(out) < trials:
        spec = GenSpec("mosic", field, dims[len(out) % len(dims)], seed, entry_bound=entry_bound)
        seed += 1
        try:
            out.append(generate(spec))
        except Infeasible:
            continue
    return out


def verify_quadruple(q):
    """Everything criteria 2-4 ask of one instance; returns (cline_ok, jacobson_ok, group_result)."""
    I = q.identity()
    note_hierarchy(q)
    cl = cline_full(q)
    cline_ok = cl.value == drazin_inverse(q.b @ q.d).inverse and cl.oracle_ok
    jac = jacobson_gdrazin(q)
    jac_ok = (jac.value == drazin_inverse(I - q.a @ q.c).inverse and jac.oracle_ok
              and jacobson_proof_obligations(q).all_hold)
    group = jacobson_group(q) if jac.extra["alpha_index"] <= 1 else None
    return cline_ok, jac_ok, group


@pytest.fixture(scope="module")
def prime_campaigns():
    results = {}
    for p in (5, 7):
        start = time.perf_counter()
        instances = mosic_instances(GF(p), MOSIC_TRIALS, (2, 3, 4))
        outcomes = [verify_quadruple(q) for q in instances]
        results[p] = {
            "elapsed": time.perf_counter() - start,
            "instances": len(instances),
            "cline_failures": sum(not c for c, _, _ in outcomes),
            "jacobson_failures": sum(not j for _, j, _ in outcomes),
            "groups": [g for _, _, g in outcomes if g is not None],
            "index_ac_ge2": sum(index_of(q.a @ q.c) >= 2 for q in instances),
        }
    return results


def test_criterion_01_drazin_oracle_soundness(record_acceptance):
    rng = random.Random(2024)
    start = time.perf_counter()
    failures, counts, indices = 0, {}, set()
    for label, F in (("Q", QQ), ("GF5", GF(5)), ("GF7", GF(7))):
        for i in range(500):
            n = 2 + i % 4
            # Sparse entries make singular, higher-index matrices common.
            A = Matrix(F, [[rng.choice([0, 0, 0, 1, -1, 2, -2, 3]) for _ in range(n)] for _ in range(n)], n)
            dec = drazin_inverse(A)
            indices.add(dec.index)
            if not verify_drazin_axioms(A, dec.inverse).ok:
                failures += 1
            counts[label] = counts.get(label, 0) + 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30 and counts == {"Q": 500, "GF5": 500, "GF7": 500}
    record_acceptance(1, "Drazin oracle soundness (Q, GF(5), GF(7); n=2..5; 500 each)", ok,
                      f"failures={failures} indices_seen={sorted(indices)} {elapsed:.1f}s < 30s")
    assert ok


def test_criterion_02_cline_at_scale(prime_campaigns, record_acceptance):
    details, ok = [], True
    for p, r in prime_campaigns.items():
        good = r["instances"] == MOSIC_TRIALS and r["cline_failures"] == 0 and r["elapsed"] < 60
        ok &= good
        details.append(f"GF({p}): {r['instances']} inst, {r['cline_failures']} fail, "
                       f"index(ac)>=2 in {r['index_ac_ge2']}, {r['elapsed']:.1f}s < 60s")
    record_acceptance(2, "Cline formula (bd)^D = b((ac)^D)^2 d, exact, 1000 Mosic per field", ok, "; ".join(details))
    assert ok


def test_criterion_03_jacobson_at_scale(prime_campaigns, record_acceptance):
    fails = {p: r["jacobson_failures"] for p, r in prime_campaigns.items()}
    ok = all(v == 0 for v in fails.values())
    record_acceptance(3, "Jacobson formula for (1-ac)^D exact + four proof obligations", ok,
                      ", ".join(f"GF({p}) failures={v}" for p, v in fails.items()))
    assert ok


def test_criterion_04_group_corollary(prime_campaigns, record_acceptance):
    groups = [g for r in prime_campaigns.values() for g in r["groups"]]
    bad = [g for g in groups if not (g.oracle_ok and g.extra["beta_index"] <= 1)]
    ok = len(groups) >= GROUP_MIN and not bad
    record_acceptance(4, "group-inverse Jacobson formula on index(1-bd) <= 1", ok,
                      f"subpopulation={len(groups)} (>= {GROUP_MIN}), failures={len(bad)}")
    assert ok


def test_criterion_05_nilpotent_transfer(record_acceptance):
    applicable = counterexamples = ac_nil = 0
    for i in range(500):
        q = generate(GenSpec("nilpotent-ac", GF(5), 2 + i % 3, i))
        note_hierarchy(q)
        if not is_nilpotent(q.a @ q.c):
            continue
        ac_nil += 1
        if check_condition(q, "NT").all_hold:
            applicable += 1
            counterexamples += not is_nilpotent(q.b @ q.d)
    ok = counterexamples == 0 and ac_nil == 500
    record_acceptance(5, "nilpotence transfers from ac to bd (500 GF(5) instances)", ok,
                      f"ac nilpotent={ac_nil}, conditions hold={applicable}, counterexamples={counterexamples}")
    assert ok


def test_criterion_07_rational_exact(record_acceptance):
    start = time.perf_counter()
    instances = mosic_instances(QQ, 200, (2, 3), entry_bound=2)
    outcomes = [verify_quadruple(q) for q in instances]
    elapsed = time.perf_counter() - start
    fails = sum(not (c and j) for c, j, _ in outcomes)
    ok = fails == 0 and elapsed < 120
    record_acceptance(7, "rational exact campaign (200 Mosic, n=2..3, entry_bound 2)", ok,
                      f"failures={fails}, {elapsed:.1f}s < 120s")
    assert ok


def test_criterion_08_complex_residuals(record_acceptance):
    worst, fails = 0.0, 0
    F = ComplexFloat()
    instances = mosic_instances(F, 200, (3,))
    for q in instances:
        note_hierarchy(q)
        I = q.identity()
        for r, target in ((cline_full(q), q.b @ q.d), (jacobson_gdrazin(q), I - q.a @ q.c)):
            dev = residual(r.value, drazin_inverse(target).inverse)
            worst = max(worst, dev, *r.residuals.values())
            fails += not r.oracle_ok
        ob = jacobson_proof_obligations(q)
        worst = max(worst, *ob.residuals.values())
        fails += not ob.all_hold
    ok = fails == 0 and worst <= 1e-8
    record_acceptance(8, "complex campaign (200 Mosic, n=3) within relative residual 1e-8", ok,
                      f"max residual={worst:.2e}, oracle failures={fails}")
    assert ok


def test_criterion_06_hierarchy(record_acceptance):
    # Arbitrary small quadruples exercise the implications where they are not automatic.
    rng = random.Random(6)
    for i in range(400):
        F = GF(2) if i % 2 else GF(3)
        q = Quadruple(*(Matrix(F, [[rng.randrange(F.p) for _ in range(2)] for _ in range(2)], 2)
                        for _ in range(4)))
        note_hierarchy(q)
    seen = HIERARCHY_SEEN["instances"]
    ok = not HIERARCHY_SEEN["violations"]
    record_acceptance(6, "condition hierarchy C3 => C1 => C2 on every generated instance", ok,
                      f"instances={seen}, violations={len(HIERARCHY_SEEN['violations'])}")
    assert ok


def test_criterion_09_reference_triple_regression(capsys, record_acceptance):
    code = main(["reference-triple"])
    doc = json.loads(capsys.readouterr().out)
    rows = {row["quantity"]: row for row in doc["discrepancies"]}
    ok = (code == 0
          and doc["verified"]["(ba)^D = 0"]
          and doc["verified"]["ca idempotent"]
          and doc["verified"]["(ca)^D = [[0,1],[0,1]]"]
          and rows.get("a(ca)^2", {}).get("computed", {}).get("rows") == [[0, 1], [0, 0]]
          and "(ac)^D" in rows)
    record_acceptance(9, "2x2 reference triple recomputed with discrepancy table", ok,
                      f"exit={code}, discrepancies={sorted(rows)}")
    assert ok


@pytest.mark.parametrize("argv", [
    ["--strategy", "mosic", "--field", "gfp", "--p", "5", "--dim-range", "2..4", "--trials", "150"],
    ["--strategy", "aba-aca", "--field", "rational", "--dim-range", "2..3", "--trials", "30", "--entry-bound", "2"],
    ["--strategy", "mosic", "--field", "complex", "--dim-range", "3", "--trials", "30"],
    ["--strategy", "rejection", "--field", "gfp", "--p", "2", "--dim-range", "2", "--trials", "10",
     "--condition", "C6", "--exclude", "C5"],
])
def test_criterion_10_determinism(argv, tmp_path, capsys, record_acceptance):
    texts = []
    for run in range(2):
        out = tmp_path / f"r{run}.json"
        main(["campaign", *argv, "--seed0", "17", "--out", str(out)])
        capsys.readouterr()
        texts.append(json.dumps(strip_timing(json.loads(out.read_text())), sort_keys=True))
    raw = [json.loads((tmp_path / f"r{k}.json").read_text()) for k in range(2)]
    ok = texts[0] == texts[1] and raw[0]["trials"] > 0
    record_acceptance(10, f"byte-identical campaign reports modulo timing ({argv[1]}, {argv[3]})", ok)
    assert ok
