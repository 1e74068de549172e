"""Drazin, group and spectral-idempotent computations, plus the axiom oracle.

The constructive path uses the core-nilpotent (Fitting) splitting
``F^n = range(A^k) (+) null(A^k)`` for ``k = index(A)``.  The oracle path,
:func:`verify_drazin_axioms`, never looks at how a candidate was built: it
only checks the defining properties, which pin the inverse down uniquely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch, NotGroupInvertible, NumericalRankAmbiguous
from .linalg import (
    Matrix,
    blockdiag,
    frobenius,
    hstack,
    is_nilpotent,
    mat_equal,
    mat_inverse,
    mat_power,
    nullspace,
    poly_span_membership,
    residual,
    row_reduce,
)

AXIOM_XAX = "XAX=X"
AXIOM_COMMUTE = "AX=XA"
AXIOM_NIL = "A-A^2X nilpotent"
AXIOM_POLY = "X in comm2(A)"
AXIOM_AXA = "AXA=A"


@dataclass(frozen=True)
class DrazinDecomposition:
    index: int
    inverse: Matrix
    idempotent: Matrix
    core_rank: int
    # Largest relative residual of the three Drazin axioms; always 0.0 in exact fields.
    residual: float = 0.0


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failed_axioms: list
    residuals: dict = field(default_factory=dict)


def _require_square(A: Matrix):
    if not A.is_square:
        raise DimensionMismatch(f"expected a square matrix, got {A.shape}")


def _index_and_power(A: Matrix, strict: bool) -> tuple[int, Matrix]:
    """Smallest k with rank(A^k) = rank(A^(k+1)), together with A^k."""
    _require_square(A)
    n = A.nrows
    power = Matrix.identity(A.field, n)
    prev_rank = n
    for k in range(n + 1):
        nxt = power @ A
        red = row_reduce(nxt, reduced=False)
        if strict and red.ambiguous:
            raise NumericalRankAmbiguous(f"rank of A^{k + 1} is within tolerance noise")
        if red.rank == prev_rank:
            return k, power
        prev_rank = red.rank
        power = nxt
    # Ranks strictly decrease before the plateau, so k <= n always returns above.
    raise AssertionError("rank sequence failed to stabilize")


def index_of(A: Matrix) -> int:
    return _index_and_power(A, strict=False)[0]


def drazin_inverse(A: Matrix) -> DrazinDecomposition:
    k, Ak = _index_and_power(A, strict=not A.field.exact)
    f = A.field
    n = A.nrows
    I = Matrix.identity(f, n)
    if k == 0:
        inv = mat_inverse(A)
        r = n
    else:
        red = row_reduce(Ak, reduced=False)
        r = red.rank
        if r == 0:
            inv = Matrix.zeros(f, n)
        else:
            U = Ak.columns(red.pivots)
            V = nullspace(Ak)
            S = hstack(U, *V)
            S_inv = mat_inverse(S)
            core = (S_inv @ A @ S).block(0, r, 0, r)
            inv = S @ blockdiag(mat_inverse(core), Matrix.zeros(f, n - r)) @ S_inv
    idem = I - A @ inv
    res = 0.0
    if not f.exact:
        res = max(
            residual(inv @ A @ inv, inv),
            residual(A @ inv, inv @ A),
            residual(mat_power(A, k + 1) @ inv, mat_power(A, k)),
        )
    return DrazinDecomposition(index=k, inverse=inv, idempotent=idem, core_rank=r, residual=res)


def group_inverse(A: Matrix) -> Matrix:
    dec = drazin_inverse(A)
    if dec.index > 1:
        raise NotGroupInvertible(f"index {dec.index} >= 2")
    return dec.inverse


def spectral_idempotent(A: Matrix) -> Matrix:
    """``I - A A^D``, the projection onto the generalized null space of ``A``."""
    return drazin_inverse(A).idempotent


def nilpotency_residual(D: Matrix) -> float:
    """How far ``D^n`` is from zero, scaled like the float nilpotency test."""
    n = D.nrows
    Dn = mat_power(D, n)
    if D.field.exact:
        return residual(Dn, Matrix.zeros(D.field, n))
    return frobenius(Dn) / max(1.0, frobenius(D) ** n)


def verify_drazin_axioms(A: Matrix, X: Matrix) -> AxiomReport:
    """Check that ``X`` is the Drazin inverse of ``A`` from the defining properties alone.

    The four properties are ``XAX = X``, ``AX = XA``, nilpotence of
    ``A - A^2 X`` and ``X`` being a polynomial in ``A``.
    """
    _require_square(A)
    if X.shape != A.shape:
        raise DimensionMismatch(f"{A.shape} vs {X.shape}")
    XAX = X @ A @ X
    AX, XA = A @ X, X @ A
    defect = A - A @ AX
    checks = {
        AXIOM_XAX: mat_equal(XAX, X),
        AXIOM_COMMUTE: mat_equal(AX, XA),
        AXIOM_NIL: is_nilpotent(defect),
        AXIOM_POLY: poly_span_membership(A, X),
    }
    residuals = {
        AXIOM_XAX: residual(XAX, X),
        AXIOM_COMMUTE: residual(AX, XA),
        AXIOM_NIL: nilpotency_residual(defect),
    }
    failed = [name for name, ok in checks.items() if not ok]
    return AxiomReport(ok=not failed, failed_axioms=failed, residuals=residuals)


def verify_group_axioms(A: Matrix, X: Matrix) -> AxiomReport:
    """``AXA = A``, ``XAX = X``, ``AX = XA``: the group inverse conditions."""
    _require_square(A)
    if X.shape != A.shape:
        raise DimensionMismatch(f"{A.shape} vs {X.shape}")
    AX, XA = A @ X, X @ A
    pairs = {
        AXIOM_AXA: (AX @ A, A),
        AXIOM_XAX: (XA @ X, X),
        AXIOM_COMMUTE: (AX, XA),
    }
    failed = [name for name, (l, r) in pairs.items() if not mat_equal(l, r)]
    residuals = {name: residual(l, r) for name, (l, r) in pairs.items()}
    return AxiomReport(ok=not failed, failed_axioms=failed, residuals=residuals)
