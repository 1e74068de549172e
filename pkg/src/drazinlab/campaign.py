"""Verification trials and campaigns.

One trial = generate an instance from a :class:`GenSpec`, evaluate every
condition, check the condition hierarchy, and run every formula whose
hypothesis holds.  A trial passes iff every oracle verdict and every asserted
implication holds.  Results that are only conjectured in the current setting
(the two-equality and single-equality Cline forms over GF(p) on instances that
do not satisfy the stronger hypotheses) are recorded as *exploratory* and do
not affect ``pass``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .drazin import drazin_inverse, index_of
from .errors import Infeasible
from .fields import QQ, PrimeField
from .identities import (
    FormulaResult,
    Quadruple,
    check_condition,
    cline_full,
    cline_triple,
    cline_triple_c6,
    cline_two_condition,
    condition_hierarchy_check,
    drazin_version_check,
    jacobson_gdrazin,
    jacobson_group,
    jacobson_proof_obligations,
    jacobson_triple,
    nilpotent_transfer,
)
from .linalg import Matrix, mat_equal
from .quadgen import GenSpec, generate, reference_triple, with_seed
from .serialize import matrix_to_json, quadruple_to_json

FAILURE_CAP = 100
TIMING_KEYS = ("elapsed_ms",)


def _summary(r: FormulaResult, exploratory: bool = False) -> dict:
    doc = {
        "oracle_ok": r.oracle_ok,
        "matches_constructive": r.matches_constructive,
        "failed_axioms": list(r.failed_axioms),
        "residuals": dict(r.residuals),
    }
    doc.update(r.extra)
    if exploratory:
        doc["exploratory"] = True
    return doc


def _formula_ok(r: FormulaResult) -> bool:
    return r.oracle_ok and r.matches_constructive


@dataclass
class TrialReport:
    gen_spec: GenSpec
    conditions: list = field(default_factory=list)
    formula_results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    exploratory_failures: list = field(default_factory=list)
    status: str = "ok"
    elapsed: float = 0.0
    quadruple: Optional[Quadruple] = None
    max_residual: float = 0.0
    indices: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, include_instance: bool = False) -> dict:
        doc = {
            "gen_spec": self.gen_spec.to_json(),
            "status": self.status,
            "pass": self.passed,
            "conditions": [c.to_json() for c in self.conditions],
            "formula_results": self.formula_results,
            "checks": self.checks,
            "failures": list(self.failures),
            "exploratory_failures": list(self.exploratory_failures),
            "indices": dict(self.indices),
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }
        if include_instance and self.quadruple is not None:
            doc["quadruple"] = quadruple_to_json(self.quadruple)
        return doc


def _record(trial: TrialReport, name: str, r: FormulaResult, exploratory: bool = False):
    trial.formula_results[name] = _summary(r, exploratory)
    trial.max_residual = max(trial.max_residual, *r.residuals.values())
    if not _formula_ok(r):
        (trial.exploratory_failures if exploratory else trial.failures).append(name)


def _run_quadruple(trial: TrialReport, q: Quadruple):
    gf = isinstance(q.field, PrimeField)
    conds = {cid: check_condition(q, cid) for cid in ("C1", "C2", "C3")}
    trial.conditions = list(conds.values())
    hier = condition_hierarchy_check(q)
    trial.checks["hierarchy"] = hier.to_json()
    if not hier.ok:
        trial.failures.extend(hier.violations)

    c1, c2 = conds["C1"].all_hold, conds["C2"].all_hold
    trial.indices["ac"] = index_of(q.a @ q.c)
    if c1:
        _record(trial, "cline_full", cline_full(q))
        jac = jacobson_gdrazin(q)
        _record(trial, "jacobson_gdrazin", jac)
        trial.indices["1-bd"] = jac.extra["alpha_index"]
        ob = jacobson_proof_obligations(q)
        trial.checks["jacobson_proof_obligations"] = ob.to_json()
        trial.max_residual = max(trial.max_residual, *ob.residuals.values())
        if not ob.all_hold:
            trial.failures.append("jacobson_proof_obligations")
        if jac.extra["alpha_index"] <= 1:
            _record(trial, "jacobson_group", jacobson_group(q))
    if c2:
        _record(trial, "cline_two_condition", cline_two_condition(q), exploratory=gf and not c1)

    nt = check_condition(q, "NT")
    if nt.all_hold:
        tr = nilpotent_transfer(q)
        trial.checks["nilpotent_transfer"] = tr.to_json()
        if not tr.consistent:
            trial.failures.append("nilpotent_transfer")

    dv = drazin_version_check(q)
    trial.checks["drazin_version"] = dv.to_json()
    if not dv.indices_finite or dv.jacobson_equal is False:
        trial.failures.append("drazin_version")
    elif dv.cline_equal is False:
        (trial.exploratory_failures if gf and not c1 else trial.failures).append("drazin_version")


def _run_triple(trial: TrialReport, q: Quadruple):
    gf = isinstance(q.field, PrimeField)
    conds = {cid: check_condition(q, cid) for cid in ("C4", "C5", "C6")}
    trial.conditions = list(conds.values())
    holds = {cid: r.all_hold for cid, r in conds.items()}
    violations = []
    if holds["C5"] and not holds["C4"]:
        violations.append("C5=>C4")
    if holds["C4"] and not holds["C6"]:
        violations.append("C4=>C6")
    trial.checks["hierarchy"] = {"holds": holds, "violations": violations, "ok": not violations}
    trial.failures.extend(violations)
    trial.indices["ac"] = index_of(q.a @ q.c)
    if holds["C4"]:
        _record(trial, "cline_triple", cline_triple(q.a, q.b, q.c))
        jac = jacobson_triple(q.a, q.b, q.c)
        _record(trial, "jacobson_triple", jac)
        trial.indices["1-ba"] = jac.extra["alpha_index"]
    if holds["C6"]:
        _record(trial, "cline_triple_c6", cline_triple_c6(q.a, q.b, q.c),
                exploratory=gf and not holds["C4"])


def run_trial(spec: GenSpec) -> TrialReport:
    trial = TrialReport(spec)
    start = time.perf_counter()
    try:
        q = generate(spec)
    except Infeasible:
        trial.status = "infeasible"
        trial.elapsed = time.perf_counter() - start
        return trial
    trial.quadruple = q
    if q.is_triple:
        _run_triple(trial, q)
    else:
        _run_quadruple(trial, q)
    trial.elapsed = time.perf_counter() - start
    return trial


@dataclass(frozen=True)
class CampaignConfig:
    base: GenSpec
    dims: tuple
    trials: int
    seed0: int = 0

    def spec_for(self, i: int) -> GenSpec:
        return with_seed(self.base, self.seed0 + i, self.dims[i % len(self.dims)])

    def to_json(self) -> dict:
        doc = self.base.to_json()
        doc.pop("seed")
        doc.pop("dim")
        doc.update({"dims": list(self.dims), "trials": self.trials, "seed0": self.seed0})
        return doc


def run_campaign(config: CampaignConfig, progress=None) -> dict:
    """Run ``config.trials`` trials with consecutive seeds and aggregate a JSON-ready report.

    A ``KeyboardInterrupt`` stops the loop early; the partial report is still
    returned with ``"interrupted": true``.
    """
    start = time.perf_counter()
    failures = infeasible = exploratory_runs = exploratory_failed = 0
    failure_details = []
    formula_counts: dict = {}
    coverage: dict = {}
    max_residual = 0.0
    done = 0
    interrupted = False
    try:
        for i in range(config.trials):
            spec = config.spec_for(i)
            t = run_trial(spec)
            done += 1
            if t.status == "infeasible":
                infeasible += 1
            if not t.passed:
                failures += 1
                if len(failure_details) < FAILURE_CAP:
                    failure_details.append(t.to_json(include_instance=True))
            for name, summary in t.formula_results.items():
                counts = formula_counts.setdefault(name, {"evaluated": 0, "failed": 0})
                counts["evaluated"] += 1
                counts["failed"] += not (summary["oracle_ok"] and summary["matches_constructive"])
                if summary.get("exploratory"):
                    exploratory_runs += 1
            exploratory_failed += len(t.exploratory_failures)
            cov = coverage.setdefault(str(spec.dim), {"instances": 0, "index_ac_ge2": 0, "index_alpha_ge2": 0})
            cov["instances"] += t.status == "ok"
            cov["index_ac_ge2"] += t.indices.get("ac", 0) >= 2
            cov["index_alpha_ge2"] += max(t.indices.get("1-bd", 0), t.indices.get("1-ba", 0)) >= 2
            max_residual = max(max_residual, t.max_residual)
            if progress is not None:
                progress(i, t)
    except KeyboardInterrupt:
        interrupted = True

    flags = [f"dim {dim}: no index(ac)>=2 instance" for dim, c in coverage.items() if not c["index_ac_ge2"]]
    flags += [f"dim {dim}: no index(1-bd)>=2 instance" for dim, c in coverage.items() if not c["index_alpha_ge2"]]
    report = {
        "config": config.to_json(),
        "trials": done,
        "failures": failures,
        "infeasible": infeasible,
        "formulas": formula_counts,
        "exploratory": {"evaluated": exploratory_runs, "failed": exploratory_failed},
        "coverage": coverage,
        "coverage_flags": flags,
        "max_residual": None if config.base.field.exact else max_residual,
        "failure_details": failure_details,
        "interrupted": interrupted,
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    return report


def strip_timing(obj):
    """Copy of a report with every timing field removed (for determinism checks)."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


# ---------------------------------------------------------- reference triple


def _zero(n=2):
    return Matrix.zeros(QQ, n)


def reference_triple_report() -> dict:
    """Recompute every quantity claimed for the reference triple and compare.

    Only the facts that survive recomputation are asserted: ``(ba)^D = 0`` and
    ``ca`` being idempotent with ``(ca)^D = ca = [[0,1],[0,1]]``.  The claimed
    values that do not survive are listed under ``discrepancies``.
    """
    q = reference_triple()
    a, b, c = q.a, q.b, q.c
    ac, ca, ab, ba = a @ c, c @ a, a @ b, b @ a
    computed = {
        "a(ca)^2": a @ ca @ ca,
        "(ab)^2a": ab @ ab @ a,
        "aba": ab @ a,
        "aca": a @ ca,
        "ac": ac,
        "ca": ca,
        "(ac)^D": drazin_inverse(ac).inverse,
        "(ca)^D": drazin_inverse(ca).inverse,
        "(ba)^D": drazin_inverse(ba).inverse,
        "(ab)^D": drazin_inverse(ab).inverse,
    }
    printed = Matrix(QQ, [[0, 1], [0, 1]])
    claims = [
        ("a(ca)^2", _zero()),
        ("(ab)^2a", _zero()),
        ("aca", Matrix(QQ, [[0, 1], [0, 0]])),
        ("aba", _zero()),
        ("(ac)^D", printed),
        ("(ba)^D", _zero()),
    ]
    table = []
    for name, claimed in claims:
        table.append({
            "quantity": name,
            "claimed": matrix_to_json(claimed),
            "computed": matrix_to_json(computed[name]),
            "agrees": mat_equal(claimed, computed[name]),
        })
    table.append({
        "quantity": "(ca)^D",
        "claimed": matrix_to_json(printed),
        "computed": matrix_to_json(computed["(ca)^D"]),
        "agrees": mat_equal(printed, computed["(ca)^D"]),
        "note": "the matrix printed under the label (ac)^D is the Drazin inverse of ca",
    })
    verified = {
        "(ba)^D = 0": computed["(ba)^D"].is_zero(),
        "ca idempotent": ca @ ca == ca,
        "(ca)^D = ca": computed["(ca)^D"] == ca,
        "(ca)^D = [[0,1],[0,1]]": computed["(ca)^D"] == printed,
    }
    return {
        "matrices": quadruple_to_json(q),
        "computed": {k: matrix_to_json(v) for k, v in computed.items()},
        "conditions": {cid: check_condition(q, cid).to_json() for cid in ("C4", "C5", "C6")},
        "discrepancies": [row for row in table if not row["agrees"]],
        "comparison": table,
        "verified": verified,
        "ok": all(verified.values()),
    }
