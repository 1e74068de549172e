"""Entwining conditions on ``(a, b, c, d)`` and the closed-form inverse formulas built on them.

Every formula returns a :class:`FormulaResult` that carries, next to the
computed value, the verdict of the independent axiom oracle against the
element whose inverse was supposedly produced.  Formulas refuse to run when
their hypothesis fails unless ``force=True``; forced results are flagged.

Condition families (all products read left to right):

====  ===================================================================
C1    b(ac)^2 = b(ac)(db) = b(db)(ac) = b(db)^2, and the same with c in
      front of every term
C2    b(ac)^2 = b(db)^2 and c(ac)^2 = c(db)^2
C3    bac = bdb and cac = cdb
C4    (ac)^2 a = acaba = abaca = a(ba)^2          (triple; d unused)
C5    aba = aca                                    (triple)
C6    a(ca)^2 = (ab)^2 a                           (triple)
NT    b(db)(ac) = b(db)^2 and c(ac)(db) = c(db)^2  (nilpotent transfer)
====  ===================================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .drazin import (
    drazin_inverse,
    index_of,
    nilpotency_residual,
    verify_drazin_axioms,
    verify_group_axioms,
)
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NotGroupInvertible,
    PreconditionFailed,
    ResolventSingular,
    Singular,
)
from .linalg import Matrix, is_nilpotent, mat_equal, mat_inverse, poly_span_membership, residual
from .serialize import matrix_to_json

CONDITION_IDS = ("C1", "C2", "C3", "C4", "C5", "C6")
QUADRUPLE_CONDITIONS = ("C1", "C2", "C3", "NT")
TRIPLE_CONDITIONS = ("C4", "C5", "C6")


@dataclass(frozen=True)
class Quadruple:
    """Four square matrices of equal size over one field.

    ``d`` may be ``None`` for triples; only C4-C6 and the triple formulas
    accept such an instance.
    """

    a: Matrix
    b: Matrix
    c: Matrix
    d: Optional[Matrix] = None
    provenance: str = field(default="user", compare=False)

    def __post_init__(self):
        mats = [m for m in (self.a, self.b, self.c, self.d) if m is not None]
        n = self.a.nrows
        for m in mats:
            if m.shape != (n, n):
                raise DimensionMismatch(f"quadruple entries must all be {n}x{n}, got {m.shape}")
            if m.field != self.a.field:
                raise FieldMismatch(f"{m.field} vs {self.a.field}")

    @property
    def n(self) -> int:
        return self.a.nrows

    @property
    def field(self):
        return self.a.field

    @property
    def is_triple(self) -> bool:
        return self.d is None

    def identity(self) -> Matrix:
        return Matrix.identity(self.field, self.n)


@dataclass(frozen=True)
class Equality:
    name: str
    holds: bool
    residual: float

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "residual": self.residual}


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    equalities: tuple
    all_hold: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "all_hold", all(e.holds for e in self.equalities))

    def to_json(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "equalities": [e.to_json() for e in self.equalities],
            "all_hold": self.all_hold,
        }


@dataclass(frozen=True)
class FormulaResult:
    formula: str
    value: Matrix
    target: Matrix
    oracle_ok: bool
    residuals: dict
    failed_axioms: list = field(default_factory=list)
    # Exact agreement with the constructive Drazin inverse of ``target``.
    matches_constructive: bool = True
    forced: bool = False
    condition: Optional[ConditionReport] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {
            "formula": self.formula,
            "value": matrix_to_json(self.value),
            "target": matrix_to_json(self.target),
            "oracle_ok": self.oracle_ok,
            "failed_axioms": list(self.failed_axioms),
            "matches_constructive": self.matches_constructive,
            "residuals": dict(self.residuals),
            "forced": self.forced,
        }
        if self.condition is not None:
            doc["condition"] = self.condition.to_json()
        doc.update(self.extra)
        return doc


# ------------------------------------------------------------------ conditions


class _Products:
    """Memoized products of the quadruple's letters, keyed by word."""

    def __init__(self, q: Quadruple):
        self._m = {k: getattr(q, k) for k in "abcd" if getattr(q, k) is not None}

    def __call__(self, word: str) -> Matrix:
        if word not in self._m:
            self._m[word] = self(word[:-1]) @ self._m[word[-1]]
        return self._m[word]


def _chain(names_and_words):
    """Consecutive equalities t1=t2, t2=t3, ... of a displayed chain."""
    return [
        (f"{n1}={n2}", w1, w2)
        for (n1, w1), (n2, w2) in zip(names_and_words, names_and_words[1:])
    ]


def _c1_row(x):
    return _chain([
        (f"{x}(ac)^2", f"{x}acac"),
        (f"{x}(ac)(db)", f"{x}acdb"),
        (f"{x}(db)(ac)", f"{x}dbac"),
        (f"{x}(db)^2", f"{x}dbdb"),
    ])


_CONDITIONS: dict[str, list] = {
    "C1": _c1_row("b") + _c1_row("c"),
    "C2": [("b(ac)^2=b(db)^2", "bacac", "bdbdb"), ("c(ac)^2=c(db)^2", "cacac", "cdbdb")],
    "C3": [("bac=bdb", "bac", "bdb"), ("cac=cdb", "cac", "cdb")],
    "C4": _chain([
        ("(ac)^2a", "acaca"),
        ("acaba", "acaba"),
        ("abaca", "abaca"),
        ("a(ba)^2", "ababa"),
    ]),
    "C5": [("aba=aca", "aba", "aca")],
    "C6": [("a(ca)^2=(ab)^2a", "acaca", "ababa")],
    "NT": [("b(db)(ac)=b(db)^2", "bdbac", "bdbdb"), ("c(ac)(db)=c(db)^2", "cacdb", "cdbdb")],
}


def check_condition(q: Quadruple, condition_id: str, products: _Products | None = None) -> ConditionReport:
    if condition_id not in _CONDITIONS:
        raise ValueError(f"unknown condition {condition_id!r}")
    if q.is_triple and condition_id in QUADRUPLE_CONDITIONS:
        raise DimensionMismatch(f"{condition_id} needs d; got a triple")
    prod = products or _Products(q)
    eqs = []
    for name, lw, rw in _CONDITIONS[condition_id]:
        lhs, rhs = prod(lw), prod(rw)
        eqs.append(Equality(name, mat_equal(lhs, rhs), residual(lhs, rhs)))
    return ConditionReport(condition_id, tuple(eqs))


@dataclass(frozen=True)
class HierarchyReport:
    holds: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"holds": dict(self.holds), "violations": list(self.violations), "ok": self.ok}


def condition_hierarchy_check(q: Quadruple) -> HierarchyReport:
    """Check C3 => C1 => C2 on one instance; failures are listed, not raised."""
    prod = _Products(q)
    holds = {cid: check_condition(q, cid, prod).all_hold for cid in ("C1", "C2", "C3")}
    violations = []
    if holds["C3"] and not holds["C1"]:
        violations.append("C3=>C1")
    if holds["C1"] and not holds["C2"]:
        violations.append("C1=>C2")
    return HierarchyReport(holds, violations)


# -------------------------------------------------------------------- formulas


def _require(q: Quadruple, condition_id: str, force: bool) -> ConditionReport:
    rep = check_condition(q, condition_id)
    if not rep.all_hold and not force:
        raise PreconditionFailed(condition_id, rep)
    return rep


def _drazin_result(name, value, target, cond, extra=None) -> FormulaResult:
    axioms = verify_drazin_axioms(target, value)
    constructive = drazin_inverse(target).inverse
    residuals = dict(axioms.residuals)
    residuals["constructive"] = residual(value, constructive)
    return FormulaResult(
        formula=name,
        value=value,
        target=target,
        oracle_ok=axioms.ok,
        residuals=residuals,
        failed_axioms=axioms.failed_axioms,
        matches_constructive=mat_equal(value, constructive),
        forced=not cond.all_hold,
        condition=cond,
        extra=extra or {},
    )


def _cline_value(left: Matrix, a: Matrix, c: Matrix, right: Matrix) -> Matrix:
    h = drazin_inverse(a @ c).inverse
    return left @ h @ h @ right


def cline_full(q: Quadruple, force: bool = False) -> FormulaResult:
    """``(bd)^D = b ((ac)^D)^2 d`` under C1."""
    cond = _require(q, "C1", force)
    return _drazin_result("cline_full", _cline_value(q.b, q.a, q.c, q.d), q.b @ q.d, cond)


def cline_two_condition(q: Quadruple, force: bool = False) -> FormulaResult:
    """Same formula as :func:`cline_full` under the weaker two-equality hypothesis C2."""
    cond = _require(q, "C2", force)
    return _drazin_result("cline_two_condition", _cline_value(q.b, q.a, q.c, q.d), q.b @ q.d, cond)


def cline_triple(a: Matrix, b: Matrix, c: Matrix, force: bool = False) -> FormulaResult:
    """``(ba)^D = b ((ac)^D)^2 a`` under C4."""
    cond = _require(Quadruple(a, b, c), "C4", force)
    return _drazin_result("cline_triple", _cline_value(b, a, c, a), b @ a, cond)


def cline_triple_c6(a: Matrix, b: Matrix, c: Matrix, force: bool = False) -> FormulaResult:
    """``(ba)^D = b ((ac)^D)^2 a`` under the single equality C6."""
    cond = _require(Quadruple(a, b, c), "C6", force)
    return _drazin_result("cline_triple_c6", _cline_value(b, a, c, a), b @ a, cond)


@dataclass(frozen=True)
class _JacobsonParts:
    value: Matrix
    beta: Matrix
    alpha_index: int


def _jacobson_value(a: Matrix, b: Matrix, c: Matrix, d: Matrix, group: bool = False) -> _JacobsonParts:
    n = a.nrows
    I = Matrix.identity(a.field, n)
    ac, bd = a @ c, b @ d
    acd, bac = ac @ d, b @ ac
    alpha = I - bd
    dec = drazin_inverse(alpha)
    x, p = dec.inverse, dec.idempotent
    geometric = I + ac + ac @ ac
    if group:
        if dec.index > 1:
            raise NotGroupInvertible(f"1-bd has index {dec.index}")
        value = (I - acd @ p @ bac) @ geometric + acd @ x @ bac
    else:
        resolvent = I - alpha @ p @ (I + bd + bd @ bd)
        try:
            resolvent_inv = mat_inverse(resolvent)
        except Singular as exc:
            raise ResolventSingular("1 - alpha alpha^pi (1 + bd + bdbd) is singular") from exc
        value = (I - acd @ p @ resolvent_inv @ bac) @ geometric + acd @ x @ bac
    return _JacobsonParts(value, I - ac, dec.index)


def jacobson_gdrazin(q: Quadruple, force: bool = False) -> FormulaResult:
    """Drazin inverse of ``1 - ac`` expressed through that of ``alpha = 1 - bd`` under C1."""
    cond = _require(q, "C1", force)
    parts = _jacobson_value(q.a, q.b, q.c, q.d)
    return _drazin_result("jacobson_gdrazin", parts.value, parts.beta, cond,
                          {"alpha_index": parts.alpha_index})


def jacobson_triple(a: Matrix, b: Matrix, c: Matrix, force: bool = False) -> FormulaResult:
    """Triple form under C4: the quadruple formula with ``d := a`` (so ``alpha = 1 - ba``)."""
    cond = _require(Quadruple(a, b, c), "C4", force)
    parts = _jacobson_value(a, b, c, a)
    return _drazin_result("jacobson_triple", parts.value, parts.beta, cond,
                          {"alpha_index": parts.alpha_index})


def jacobson_group(q: Quadruple, force: bool = False) -> FormulaResult:
    """Group inverse of ``1 - ac`` from that of ``1 - bd`` under C1; needs ``index(1 - bd) <= 1``."""
    cond = _require(q, "C1", force)
    parts = _jacobson_value(q.a, q.b, q.c, q.d, group=True)
    value, beta = parts.value, parts.beta
    axioms = verify_group_axioms(beta, value)
    beta_index = index_of(beta)
    constructive = drazin_inverse(beta).inverse
    residuals = dict(axioms.residuals)
    residuals["constructive"] = residual(value, constructive)
    failed = list(axioms.failed_axioms)
    if beta_index > 1:
        failed.append("index(1-ac)<=1")
    return FormulaResult(
        formula="jacobson_group",
        value=value,
        target=beta,
        oracle_ok=not failed,
        residuals=residuals,
        failed_axioms=failed,
        matches_constructive=mat_equal(value, constructive),
        forced=not cond.all_hold,
        condition=cond,
        extra={"alpha_index": parts.alpha_index, "beta_index": beta_index},
    )


@dataclass(frozen=True)
class ObligationReport:
    obligations: dict
    residuals: dict

    @property
    def all_hold(self) -> bool:
        return all(self.obligations.values())

    def to_json(self) -> dict:
        return {"obligations": dict(self.obligations), "residuals": dict(self.residuals),
                "all_hold": self.all_hold}


def jacobson_proof_obligations(q: Quadruple, force: bool = False) -> ObligationReport:
    """The defining properties of ``y = beta^D`` checked one by one on the formula's ``y``."""
    _require(q, "C1", force)
    parts = _jacobson_value(q.a, q.b, q.c, q.d)
    y, beta = parts.value, parts.beta
    yb, by = y @ beta, beta @ y
    ybY = yb @ y
    defect = beta - by @ beta
    obligations = {
        "y beta y = y": mat_equal(ybY, y),
        "beta y = y beta": mat_equal(by, yb),
        "beta - beta y beta nilpotent": is_nilpotent(defect),
        "y in comm2(beta)": poly_span_membership(beta, y),
    }
    residuals = {
        "y beta y = y": residual(ybY, y),
        "beta y = y beta": residual(by, yb),
        "beta - beta y beta nilpotent": nilpotency_residual(defect),
    }
    return ObligationReport(obligations, residuals)


@dataclass(frozen=True)
class TransferReport:
    ac_nilpotent: bool
    bd_nilpotent: bool

    @property
    def consistent(self) -> bool:
        return not self.ac_nilpotent or self.bd_nilpotent

    def to_json(self) -> dict:
        return {"ac_nilpotent": self.ac_nilpotent, "bd_nilpotent": self.bd_nilpotent,
                "consistent": self.consistent}


def nilpotent_transfer(q: Quadruple, force: bool = False) -> TransferReport:
    """Under the NT equalities, nilpotence of ``ac`` must carry over to ``bd``."""
    _require(q, "NT", force)
    return TransferReport(is_nilpotent(q.a @ q.c), is_nilpotent(q.b @ q.d))


@dataclass(frozen=True)
class DrazinVersionReport:
    n: int
    indices: dict
    # None when the hypothesis of the check does not hold on this instance.
    cline_equal: Optional[bool]
    jacobson_equal: Optional[bool]

    @property
    def indices_finite(self) -> bool:
        return all(k <= self.n for k in self.indices.values())

    @property
    def ok(self) -> bool:
        return self.indices_finite and self.cline_equal is not False and self.jacobson_equal is not False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "indices": dict(self.indices),
            "indices_finite": self.indices_finite,
            "cline_equal": self.cline_equal,
            "jacobson_equal": self.jacobson_equal,
            "ok": self.ok,
        }


def drazin_version_check(q: Quadruple) -> DrazinVersionReport:
    """Index bookkeeping plus the Drazin (nilpotent-defect) versions of both formulas.

    Every matrix has finite index, so the "if and only if" parts collapse to
    reporting indices; the formula equalities are checked against the
    constructive inverse whenever C2 (Cline) or C1 (Jacobson) holds.
    """
    I = q.identity()
    ac, bd = q.a @ q.c, q.b @ q.d
    indices = {"ac": index_of(ac), "bd": index_of(bd), "1-bd": index_of(I - bd), "1-ac": index_of(I - ac)}
    cline_equal = jacobson_equal = None
    if check_condition(q, "C2").all_hold:
        value = _cline_value(q.b, q.a, q.c, q.d)
        cline_equal = mat_equal(value, drazin_inverse(bd).inverse)
    if check_condition(q, "C1").all_hold:
        value = _jacobson_value(q.a, q.b, q.c, q.d).value
        jacobson_equal = mat_equal(value, drazin_inverse(I - ac).inverse)
    return DrazinVersionReport(q.n, indices, cline_equal, jacobson_equal)

