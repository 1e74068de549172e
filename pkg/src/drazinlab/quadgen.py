"""Seeded generators of quadruples and triples that satisfy a chosen condition family.

The non-trivial families are produced by solving linear systems: both
``bdb = bac, cdb = cac`` (C3, unknown ``d``) and ``aca = aba`` (C5, unknown
``c``) are linear in the unknown once the other letters are sampled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from .errors import Exhausted, Infeasible
from .fields import QQ, ComplexFloat, Field, PrimeField, field_from_json
from .identities import (
    CONDITION_IDS,
    TRIPLE_CONDITIONS,
    Quadruple,
    check_condition,
)
from .linalg import GeneralSolution, Matrix, solve_general

STRATEGIES = ("classic", "mosic", "aba-aca", "nilpotent-ac", "rejection", "reference-triple")
TRIPLE_STRATEGIES = ("aba-aca", "reference-triple")

DEFAULT_ENTRY_BOUND = 3
DEFAULT_RETRIES = 32
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class GenSpec:
    strategy: str
    field: Field
    dim: int
    seed: int
    entry_bound: int = DEFAULT_ENTRY_BOUND
    # rejection only: condition that must hold, and optionally one that must fail
    condition: Optional[str] = None
    exclude: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    retries: int = DEFAULT_RETRIES

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")
        if self.strategy == "rejection" and self.condition not in CONDITION_IDS:
            raise ValueError("rejection needs a condition C1..C6")
        if self.exclude is not None and self.exclude not in CONDITION_IDS:
            raise ValueError(f"unknown exclude condition {self.exclude!r}")
        if self.exclude is not None and (
                (self.exclude in TRIPLE_CONDITIONS) != (self.condition in TRIPLE_CONDITIONS)):
            raise ValueError("condition and exclude must both be triple or both quadruple conditions")

    @property
    def yields_triple(self) -> bool:
        if self.strategy == "rejection":
            return self.condition in TRIPLE_CONDITIONS
        return self.strategy in TRIPLE_STRATEGIES

    def rng(self) -> random.Random:
        return random.Random(self.seed)

    def to_json(self) -> dict:
        doc = {"strategy": self.strategy, **self.field.to_json(), "dim": self.dim,
               "seed": self.seed, "entry_bound": self.entry_bound}
        if isinstance(self.field, ComplexFloat):
            doc["eps_rel"] = self.field.eps_rel
        if self.condition is not None:
            doc["condition"] = self.condition
        if self.exclude is not None:
            doc["exclude"] = self.exclude
        if self.strategy == "rejection":
            doc["budget"] = self.budget
        return doc

    @classmethod
    def from_json(cls, doc: dict, eps_rel: float | None = None) -> "GenSpec":
        if not isinstance(doc, dict):
            raise ValueError("GenSpec must be a JSON object")
        try:
            return cls(
                strategy=doc["strategy"],
                field=field_from_json(doc, doc.get("eps_rel", eps_rel)),
                dim=int(doc["dim"]),
                seed=int(doc["seed"]),
                entry_bound=int(doc.get("entry_bound", DEFAULT_ENTRY_BOUND)),
                condition=doc.get("condition"),
                exclude=doc.get("exclude"),
                budget=int(doc.get("budget", DEFAULT_BUDGET)),
                retries=int(doc.get("retries", DEFAULT_RETRIES)),
            )
        except KeyError as exc:
            raise ValueError(f"GenSpec is missing {exc.args[0]!r}") from None


# ------------------------------------------------------------------ sampling


def _scalar(rng: random.Random, spec: GenSpec, nonzero: bool = False):
    F = spec.field
    if isinstance(F, ComplexFloat):
        return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    B = spec.entry_bound
    while True:
        x = F.coerce(rng.randint(-B, B))
        if not nonzero or not F.is_zero(x):
            return x


def _matrix(rng: random.Random, spec: GenSpec, shape: str = "full") -> Matrix:
    n, F = spec.dim, spec.field
    zero = F.zero()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if (shape == "strict-upper" and j <= i) or (shape == "upper" and j < i):
                row.append(zero)
            else:
                row.append(_scalar(rng, spec))
        rows.append(row)
    return Matrix(F, rows, n)


def _uniform_matrix(rng: random.Random, spec: GenSpec) -> Matrix:
    """Uniform over all of M_n(GF(p)); other fields fall back to bounded entries."""
    F = spec.field
    if isinstance(F, PrimeField):
        n = spec.dim
        return Matrix(F, [[rng.randrange(F.p) for _ in range(n)] for _ in range(n)], n)
    return _matrix(rng, spec)


def _affine_sample(sol: GeneralSolution, rng: random.Random, spec: GenSpec, nonzero: bool) -> Matrix:
    x = sol.particular
    for v in sol.nullspace_basis:
        x = x + v.scale(_scalar(rng, spec, nonzero=nonzero))
    return x


def _unvec(v: Matrix, n: int) -> Matrix:
    e = v.entries
    return Matrix._raw(v.field, [e[i * n:(i + 1) * n] for i in range(n)], n)


def _sandwich_system(pairs, n: int, F: Field):
    """Coefficient matrix of X -> [L X R for (L, R, _) in pairs] on row-major vec(X).

    ``(L X R)[i][j] = sum_{k,l} L[i][k] X[k][l] R[l][j]``.
    """
    rows, rhs = [], []
    for L, R, target in pairs:
        for i in range(n):
            for j in range(n):
                rows.append([L[i, k] * R[l, j] for k in range(n) for l in range(n)])
                rhs.append([target[i, j]])
    return Matrix(F, rows, n * n), Matrix(F, rhs, 1)


def mosic_d_solutions(a: Matrix, b: Matrix, c: Matrix) -> GeneralSolution | None:
    """All ``d`` (vectorized row-major) with ``bdb = bac`` and ``cdb = cac``."""
    n = a.nrows
    ac = a @ c
    A, B = _sandwich_system([(b, b, b @ ac), (c, b, c @ ac)], n, a.field)
    return solve_general(A, B)


def aba_aca_solutions(a: Matrix, b: Matrix) -> GeneralSolution:
    """All ``c`` (vectorized row-major) with ``aca = aba``; never empty since ``c = b`` works."""
    n = a.nrows
    A, B = _sandwich_system([(a, a, a @ b @ a)], n, a.field)
    return solve_general(A, B)


# ---------------------------------------------------------------- generators


def gen_classic(spec: GenSpec) -> Quadruple:
    rng = spec.rng()
    a, b = _matrix(rng, spec), _matrix(rng, spec)
    return Quadruple(a, b, b, a, provenance="classic")


def _try_mosic(rng, spec, a, b, c) -> Quadruple | None:
    sol = mosic_d_solutions(a, b, c)
    if sol is None:
        return None
    d = _unvec(_affine_sample(sol, rng, spec, nonzero=False), spec.dim)
    return Quadruple(a, b, c, d, provenance=spec.strategy)


def gen_mosic(spec: GenSpec) -> Quadruple:
    rng = spec.rng()
    for _ in range(spec.retries):
        a, b, c = (_matrix(rng, spec) for _ in range(3))
        q = _try_mosic(rng, spec, a, b, c)
        if q is not None:
            return q
    raise Infeasible(f"no consistent d after {spec.retries} samples (seed {spec.seed})")


def gen_aba_aca(spec: GenSpec) -> Quadruple:
    rng = spec.rng()
    a, b = _matrix(rng, spec), _matrix(rng, spec)
    sol = aba_aca_solutions(a, b)
    # Shift the affine set so it is anchored at b; nonzero weights keep c != b when possible.
    anchored = GeneralSolution(b.vec(), sol.nullspace_basis)
    c = _unvec(_affine_sample(anchored, rng, spec, nonzero=True), spec.dim)
    return Quadruple(a, b, c, provenance="aba-aca")


def gen_nilpotent_ac(spec: GenSpec) -> Quadruple:
    rng = spec.rng()
    for _ in range(spec.retries):
        a = _matrix(rng, spec, "strict-upper")
        c = _matrix(rng, spec, "upper")
        b = _matrix(rng, spec)
        q = _try_mosic(rng, spec, a, b, c)
        if q is not None:
            return q
    a = _matrix(rng, spec, "strict-upper")
    b = _matrix(rng, spec, "upper")
    return Quadruple(a, b, b, a, provenance="nilpotent-ac/classic")


def gen_rejection(spec: GenSpec) -> Quadruple:
    rng = spec.rng()
    triple = spec.yields_triple
    for _ in range(spec.budget):
        a, b, c = (_uniform_matrix(rng, spec) for _ in range(3))
        d = None if triple else _uniform_matrix(rng, spec)
        q = Quadruple(a, b, c, d, provenance=f"rejection:{spec.condition}")
        if not check_condition(q, spec.condition).all_hold:
            continue
        if spec.exclude is not None and check_condition(q, spec.exclude).all_hold:
            continue
        return q
    raise Exhausted(f"no {spec.condition} instance in {spec.budget} samples")


def reference_triple() -> Quadruple:
    """A fixed 2x2 triple with ``ba`` nilpotent and ``ca`` idempotent, over the rationals."""
    a = Matrix(QQ, [[0, 1], [0, 0]])
    b = Matrix(QQ, [[1, 0], [0, 0]])
    c = Matrix(QQ, [[1, 0], [1, 1]])
    return Quadruple(a, b, c, provenance="reference-triple")


_DISPATCH = {
    "classic": gen_classic,
    "mosic": gen_mosic,
    "aba-aca": gen_aba_aca,
    "nilpotent-ac": gen_nilpotent_ac,
    "rejection": gen_rejection,
    "reference-triple": lambda spec: reference_triple(),
}


def generate(spec: GenSpec) -> Quadruple:
    return _DISPATCH[spec.strategy](spec)


def with_seed(spec: GenSpec, seed: int, dim: int | None = None) -> GenSpec:
    return replace(spec, seed=seed, dim=spec.dim if dim is None else dim)
