"""Coefficient fields: exact rationals, prime fields and tolerance-based complex floats.

A field object knows how to canonicalize raw Python numbers into its carrier
and how to serialize them.  Matrix kernels do ordinary ``+``/``*`` on the
carrier values and then call :meth:`Field.coerce` to bring the result back to
canonical form (reduce mod p, etc.).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

DEFAULT_EPS = 1e-9


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


class Field:
    """Common interface of the three supported fields."""

    exact: bool = True
    name: str = ""

    def coerce(self, x: Any):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def inv(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0

    def from_int(self, k: int):
        return self.coerce(k)

    def encode(self, x) -> Any:
        raise NotImplementedError

    def decode(self, v: Any):
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"field": self.name}


@dataclass(frozen=True)
class ExactRational(Field):
    """The rationals, carried as reduced :class:`fractions.Fraction` values."""

    exact = True
    name = "rational"

    def coerce(self, x):
        return x if type(x) is Fraction else Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def encode(self, x):
        x = Fraction(x)
        if x.denominator == 1:
            return x.numerator
        return f"{x.numerator}/{x.denominator}"

    def decode(self, v):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise ValueError(f"rational entry must be an integer or 'num/den' string, got {v!r}")
        return Fraction(v)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(Field):
    """GF(p); elements are canonical residues in ``range(p)``."""

    p: int

    exact = True
    name = "gfp"

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"modulus must be a prime >= 2, got {self.p!r}")

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def is_zero(self, x) -> bool:
        return x % self.p == 0

    def encode(self, x):
        return int(x)

    def decode(self, v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"gfp entry must be an integer, got {v!r}")
        return v % self.p

    def to_json(self) -> dict:
        return {"field": self.name, "p": self.p}

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class ComplexFloat(Field):
    """IEEE double complex numbers with a relative equality tolerance."""

    eps_rel: float = DEFAULT_EPS

    exact = False
    name = "complex"

    def __post_init__(self):
        if not self.eps_rel > 0:
            raise ValueError("eps_rel must be positive")

    def coerce(self, x):
        return complex(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / complex(x)

    def encode(self, x):
        return [x.real, x.imag]

    def decode(self, v):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return complex(v)
        if (isinstance(v, (list, tuple)) and len(v) == 2
                and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)):
            return complex(v[0], v[1])
        raise ValueError(f"complex entry must be a [re, im] pair, got {v!r}")

    def __str__(self):
        return f"C(eps={self.eps_rel:g})"


FieldSpec = Union[ExactRational, PrimeField, ComplexFloat]

QQ = ExactRational()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj: dict, eps_rel: float | None = None) -> Field:
    """Build a field from the ``field``/``p`` keys of a matrix JSON document."""
    kind = obj.get("field")
    if kind == "rational":
        return QQ
    if kind == "gfp":
        if "p" not in obj:
            raise ValueError("gfp matrix requires 'p'")
        return PrimeField(obj["p"])
    if kind == "complex":
        return ComplexFloat(eps_rel if eps_rel is not None else DEFAULT_EPS)
    raise ValueError(f"unknown field {kind!r}")
