from fractions import Fraction

import pytest

from drazinlab.fields import GF, QQ, ComplexFloat, PrimeField, field_from_json


@pytest.mark.parametrize("p", [0, 1, 4, 9, 15, -5])
def test_prime_field_rejects_non_primes(p):
    with pytest.raises(ValueError):
        PrimeField(p)


def test_prime_field_residues_are_canonical():
    F = GF(7)
    assert F.coerce(-1) == 6
    assert F.coerce(Fraction(1, 2)) == 4  # 2 * 4 = 8 = 1 mod 7
    assert F.inv(3) * 3 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(7)


def test_rationals_stay_reduced():
    x = QQ.coerce(Fraction(6, -4))
    assert (x.numerator, x.denominator) == (-3, 2)
    assert QQ.encode(x) == "-3/2"
    assert QQ.encode(QQ.coerce(4)) == 4
    assert QQ.decode("-3/2") == x
    with pytest.raises(ValueError):
        QQ.decode(1.5)


def test_complex_codec_and_eps():
    F = ComplexFloat(1e-6)
    assert F.decode([1.0, -2.0]) == complex(1, -2)
    assert F.encode(complex(1, -2)) == [1.0, -2.0]
    with pytest.raises(ValueError):
        ComplexFloat(0.0)
    with pytest.raises(ValueError):
        F.decode([1.0])


def test_field_from_json():
    assert field_from_json({"field": "rational"}) == QQ
    assert field_from_json({"field": "gfp", "p": 5}) == GF(5)
    assert field_from_json({"field": "complex"}, eps_rel=1e-4).eps_rel == 1e-4
    with pytest.raises(ValueError):
        field_from_json({"field": "gfp"})
    with pytest.raises(ValueError):
        field_from_json({"field": "reals"})
