"""Dense matrices over a :class:`~drazinlab.fields.Field` and the exact kernel on top of them.

Elimination is field-dispatched:

* GF(p): plain Gauss-Jordan on residues.
* rationals: rows are scaled to integers and reduced with fraction-free
  (Bareiss) elimination; fractions only appear in the final back substitution.
* complex floats: partial pivoting with the pivot threshold
  ``eps_rel * ||A||_F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, Singular
from .fields import ComplexFloat, ExactRational, Field, PrimeField

# Candidate pivots within this factor of the threshold make a rank decision ambiguous.
AMBIGUITY_GUARD = 100.0


class Matrix:
    """Immutable dense matrix; rows are stored as tuples of canonical field elements."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        self._set(field, rows, ncols)

    def _set(self, field, rows, ncols):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, key, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        # Entries must already be canonical; skips coercion on hot paths.
        self = object.__new__(cls)
        self._set(field, tuple(tuple(r) for r in rows), ncols)
        return self

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        return cls._raw(field, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        zero = field.zero()
        return cls._raw(field, [[zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def diag(cls, field: Field, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def entries(self) -> list:
        return [x for r in self.rows for x in r]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self):
        enc = self.field.encode
        return f"Matrix({self.field}, {[[enc(x) for x in r] for r in self.rows]!r})"

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_arith(self, other, "add")

    def __sub__(self, other: "Matrix") -> "Matrix":
        return mat_arith(self, other, "sub")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_arith(self, other, "mul")

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix._raw(f, [[f.coerce(-x) for x in r] for r in self.rows], self.ncols)

    def scale(self, s) -> "Matrix":
        f = self.field
        s = f.coerce(s)
        return Matrix._raw(f, [[f.coerce(s * x) for x in r] for r in self.rows], self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.field, list(zip(*self.rows)) if self.nrows else [], self.nrows)

    def columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(self.field, [r[c0:c1] for r in self.rows[r0:r1]], c1 - c0)

    def vec(self) -> "Matrix":
        """Row-major flattening into a column vector."""
        return Matrix._raw(self.field, [[x] for x in self.entries], 1)

    def is_zero(self) -> bool:
        f = self.field
        if f.exact:
            return all(f.is_zero(x) for r in self.rows for x in r)
        return frobenius(self) == 0.0


def hstack(*blocks: Matrix) -> Matrix:
    f = blocks[0].field
    for b in blocks[1:]:
        blocks[0]._check(b)
        if b.nrows != blocks[0].nrows:
            raise DimensionMismatch("hstack needs equal row counts")
    rows = [sum((b.rows[i] for b in blocks), ()) for i in range(blocks[0].nrows)]
    return Matrix._raw(f, rows, sum(b.ncols for b in blocks))


def vstack(*blocks: Matrix) -> Matrix:
    f = blocks[0].field
    for b in blocks[1:]:
        blocks[0]._check(b)
        if b.ncols != blocks[0].ncols:
            raise DimensionMismatch("vstack needs equal column counts")
    return Matrix._raw(f, [r for b in blocks for r in b.rows], blocks[0].ncols)


def blockdiag(*blocks: Matrix) -> Matrix:
    f = blocks[0].field
    zero = f.zero()
    total = sum(b.ncols for b in blocks)
    rows, offset = [], 0
    for b in blocks:
        for r in b.rows:
            rows.append([zero] * offset + list(r) + [zero] * (total - offset - b.ncols))
        offset += b.ncols
    return Matrix._raw(f, rows, total)


def mat_arith(lhs: Matrix, rhs: Matrix, op: str) -> Matrix:
    lhs._check(rhs)
    f = lhs.field
    co = f.coerce
    if op in ("add", "sub"):
        if lhs.shape != rhs.shape:
            raise DimensionMismatch(f"{op} of {lhs.shape} and {rhs.shape}")
        if op == "add":
            rows = [[co(x + y) for x, y in zip(r, s)] for r, s in zip(lhs.rows, rhs.rows)]
        else:
            rows = [[co(x - y) for x, y in zip(r, s)] for r, s in zip(lhs.rows, rhs.rows)]
        return Matrix._raw(f, rows, lhs.ncols)
    if op == "mul":
        if lhs.ncols != rhs.nrows:
            raise DimensionMismatch(f"product of {lhs.shape} and {rhs.shape}")
        cols = list(zip(*rhs.rows)) if rhs.nrows else [()] * rhs.ncols
        rows = [[co(sum(map(mul, r, c))) for c in cols] for r in lhs.rows]
        return Matrix._raw(f, rows, rhs.ncols)
    raise ValueError(f"unknown op {op!r}")


def frobenius(A: Matrix) -> float:
    """Frobenius norm as a float; GF(p) residues are read as integers in [0, p)."""
    return math.sqrt(sum(abs(complex(x)) ** 2 if isinstance(x, complex) else float(x) ** 2
                         for r in A.rows for x in r))


def residual(lhs: Matrix, rhs: Matrix) -> float:
    """Distance used in reports; zero iff the matrices are equal in an exact field.

    Complex and rational fields use the relative Frobenius distance
    ``||lhs - rhs||_F / max(1, ||lhs||_F, ||rhs||_F)``.  GF(p) has no norm, so
    the fraction of mismatching entries is reported instead.
    """
    if lhs.shape != rhs.shape:
        raise DimensionMismatch(f"{lhs.shape} vs {rhs.shape}")
    if isinstance(lhs.field, PrimeField):
        total = lhs.nrows * lhs.ncols
        diff = sum(x != y for r, s in zip(lhs.rows, rhs.rows) for x, y in zip(r, s))
        return diff / total if total else 0.0
    return frobenius(lhs - rhs) / max(1.0, frobenius(lhs), frobenius(rhs))


def mat_equal(lhs: Matrix, rhs: Matrix) -> bool:
    if lhs.shape != rhs.shape:
        raise DimensionMismatch(f"{lhs.shape} vs {rhs.shape}")
    lhs._check(rhs)
    f = lhs.field
    if f.exact:
        return lhs.rows == rhs.rows
    diff = frobenius(lhs - rhs)
    return diff <= f.eps_rel * max(1.0, frobenius(lhs), frobenius(rhs))


# ---------------------------------------------------------------- elimination


@dataclass(frozen=True)
class Reduction:
    rows: list          # echelon (or reduced echelon) rows, pivot rows first
    pivots: list        # pivot column of each leading row
    ambiguous: bool = False

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _reduce_gfp(rows, ncols, p, reduced):
    rows = [list(r) for r in rows]
    m = len(rows)
    pivots = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        prow = [x * inv % p for x in rows[r]]
        rows[r] = prow
        for i in (range(m) if reduced else range(r + 1, m)):
            f = rows[i][col]
            if i != r and f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
    return Reduction(rows, pivots)


def _bareiss(int_rows, ncols):
    """Fraction-free forward elimination; every entry stays an integer minor."""
    M = [list(r) for r in int_rows]
    m = len(M)
    pivots = []
    prev = 1
    r = 0
    for col in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][col]
        prow = M[r]
        for i in range(r + 1, m):
            row = M[i]
            f = row[col]
            for j in range(col + 1, ncols):
                row[j] = (pv * row[j] - f * prow[j]) // prev
            row[col] = 0
        prev = pv
        pivots.append(col)
        r += 1
    return M, pivots


def _reduce_rational(rows, ncols, reduced):
    int_rows = []
    for r in rows:
        den = math.lcm(*(x.denominator for x in r)) if r else 1
        int_rows.append([x.numerator * (den // x.denominator) for x in r])
    M, pivots = _bareiss(int_rows, ncols)
    if not reduced:
        return Reduction([[Fraction(x) for x in r] for r in M], pivots)
    rank = len(pivots)
    R = [[Fraction(x) for x in r] for r in M]
    for i in range(rank - 1, -1, -1):
        col = pivots[i]
        pv = R[i][col]
        R[i] = [x / pv for x in R[i]]
        for k in range(i):
            f = R[k][col]
            if f:
                R[k] = [x - f * y for x, y in zip(R[k], R[i])]
    return Reduction(R, pivots)


def _reduce_complex(rows, ncols, eps, reduced):
    rows = [list(r) for r in rows]
    m = len(rows)
    tol = eps * math.sqrt(sum(abs(x) ** 2 for r in rows for x in r))
    lo, hi = tol / AMBIGUITY_GUARD, tol * AMBIGUITY_GUARD
    ambiguous = False
    pivots = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        piv = max(range(r, m), key=lambda i: abs(rows[i][col]))
        mag = abs(rows[piv][col])
        if tol > 0 and lo < mag <= hi:
            ambiguous = True
        if mag <= tol or mag == 0.0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        prow = [x / pv for x in rows[r]]
        prow[col] = 1.0 + 0j
        rows[r] = prow
        for i in (range(m) if reduced else range(r + 1, m)):
            f = rows[i][col]
            if i != r and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
                rows[i][col] = 0j
        pivots.append(col)
        r += 1
    return Reduction(rows, pivots, ambiguous)


def row_reduce(A: Matrix, reduced: bool = True) -> Reduction:
    """Row-reduce ``A`` to (reduced) echelon form."""
    f = A.field
    if isinstance(f, PrimeField):
        return _reduce_gfp(A.rows, A.ncols, f.p, reduced)
    if isinstance(f, ExactRational):
        return _reduce_rational(A.rows, A.ncols, reduced)
    if isinstance(f, ComplexFloat):
        return _reduce_complex(A.rows, A.ncols, f.eps_rel, reduced)
    raise TypeError(f"unsupported field {f!r}")


def rank(A: Matrix) -> int:
    return row_reduce(A, reduced=False).rank


@dataclass(frozen=True)
class GeneralSolution:
    """All solutions of ``A X = B``: ``particular + span(nullspace_basis)`` columnwise."""

    particular: Matrix
    nullspace_basis: list


def solve_general(A: Matrix, B: Matrix) -> GeneralSolution | None:
    """Solve ``A X = B``; returns ``None`` when the system is inconsistent."""
    A._check(B)
    if A.nrows != B.nrows:
        raise DimensionMismatch(f"A has {A.nrows} rows, B has {B.nrows}")
    f = A.field
    n, k = A.ncols, B.ncols
    red = row_reduce(hstack(A, B), reduced=True)
    if any(c >= n for c in red.pivots):
        return None
    zero, one = f.zero(), f.one()
    X = [[zero] * k for _ in range(n)]
    for i, c in enumerate(red.pivots):
        X[c] = [f.coerce(x) for x in red.rows[i][n:]]
    pivot_set = set(red.pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [zero] * n
        v[free] = one
        for i, c in enumerate(red.pivots):
            v[c] = f.coerce(-red.rows[i][free])
        basis.append(Matrix._raw(f, [[x] for x in v], 1))
    return GeneralSolution(Matrix._raw(f, X, k), basis)


def nullspace(A: Matrix) -> list:
    """Basis of ``{v : A v = 0}`` as column vectors."""
    return solve_general(A, Matrix.zeros(A.field, A.nrows, 1)).nullspace_basis


def mat_inverse(A: Matrix) -> Matrix:
    if not A.is_square:
        raise DimensionMismatch(f"inverse of non-square {A.shape}")
    sol = solve_general(A, Matrix.identity(A.field, A.nrows))
    if sol is None or sol.nullspace_basis:
        raise Singular("matrix is not invertible")
    return sol.particular


def mat_power(A: Matrix, k: int) -> Matrix:
    if not A.is_square:
        raise DimensionMismatch(f"power of non-square {A.shape}")
    if k < 0:
        raise ValueError("negative exponent")
    result = Matrix.identity(A.field, A.nrows)
    base = A
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_nilpotent(A: Matrix) -> bool:
    """Nilpotency via ``A^n = 0``; the only kind of quasinilpotence a matrix can have."""
    if not A.is_square:
        raise DimensionMismatch(f"nilpotency of non-square {A.shape}")
    n = A.nrows
    P = mat_power(A, n)
    f = A.field
    if f.exact:
        return P.is_zero()
    return frobenius(P) <= f.eps_rel * max(1.0, frobenius(A) ** n)


def powers(A: Matrix, count: int) -> list:
    out = [Matrix.identity(A.field, A.nrows)]
    for _ in range(count - 1):
        out.append(out[-1] @ A)
    return out


def poly_span_membership(A: Matrix, X: Matrix) -> bool:
    """Is ``X`` a polynomial in ``A``?

    Over a field this is the same as ``X`` lying in the double commutant of
    ``A``.  Cayley-Hamilton caps the degree at ``n - 1``.
    """
    if not (A.is_square and X.shape == A.shape):
        raise DimensionMismatch(f"{A.shape} vs {X.shape}")
    A._check(X)
    n = A.nrows
    P = hstack(*(M.vec() for M in powers(A, n)))
    return solve_general(P, X.vec()) is not None
