import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import M, matrices
from drazinlab.drazin import drazin_inverse, verify_drazin_axioms
from drazinlab.errors import DimensionMismatch, FieldMismatch, NotGroupInvertible, PreconditionFailed
from drazinlab.fields import GF, QQ
from drazinlab.identities import (
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
from drazinlab.linalg import Matrix, mat_inverse
from drazinlab.quadgen import GenSpec, generate, reference_triple
from drazinlab.serialize import quadruple_from_json

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "mosic_gf5_n3_seed42.json"


def load_fixture():
    with open(FIXTURE) as fh:
        return quadruple_from_json(json.load(fh))


def classic(a, b):
    return Quadruple(a, b, b, a)


# ----------------------------------------------------------------- examples


def test_cline_on_classic_nilpotent_pair():
    a = M([[0, 1], [0, 0]])
    b = M([[1, 0], [0, 0]])
    r = cline_full(classic(a, b))
    assert r.value.is_zero()
    assert r.oracle_ok and r.matches_constructive and not r.forced


def test_cline_on_seeded_mosic_fixture():
    q = load_fixture()
    r = cline_full(q)
    assert r.value == drazin_inverse(q.b @ q.d).inverse
    assert r.oracle_ok


def test_fixture_is_the_generator_output():
    spec = GenSpec(strategy="mosic", field=GF(5), dim=3, seed=42)
    assert generate(spec) == load_fixture()


def test_identity_quadruple():
    I = Matrix.identity(QQ, 3)
    q = Quadruple(I, I, I, I)
    assert cline_full(q).value == I
    # 1 - ac = 0, whose Drazin inverse is 0
    assert jacobson_gdrazin(q).value.is_zero()


def test_jacobson_with_nilpotent_ac_and_zero_bd():
    a = M([[0, 1], [0, 0]])
    I = Matrix.identity(QQ, 2)
    Z = Matrix.zeros(QQ, 2)
    q = Quadruple(a, Z, I, Z)
    r = jacobson_gdrazin(q)
    assert r.value == I + a  # (1 - a)^(-1) for a^2 = 0
    assert r.oracle_ok


def test_jacobson_group_with_invertible_alpha():
    a = M([[1, 2], [0, 1]])
    b = M([[0, 1], [1, 0]])
    q = classic(a, b)
    r = jacobson_group(q)
    assert r.extra["alpha_index"] == 0
    assert r.value == mat_inverse(Matrix.identity(QQ, 2) - a @ b)
    assert r.oracle_ok


def test_jacobson_group_refuses_index_two_alpha():
    # bd = 1 - N with N a Jordan block, so alpha = N has index 2
    N = M([[0, 1], [0, 0]])
    I = Matrix.identity(QQ, 2)
    q = Quadruple(I, I - N, I - N, I)
    with pytest.raises(NotGroupInvertible):
        jacobson_group(q)


def test_obligations_hold_on_fixture():
    rep = jacobson_proof_obligations(load_fixture())
    assert rep.all_hold
    assert len(rep.obligations) == 4


def test_precondition_refusal_and_force():
    q = reference_triple()
    with pytest.raises(PreconditionFailed) as exc:
        cline_triple(q.a, q.b, q.c)
    assert exc.value.condition_id == "C4"
    forced = cline_triple(q.a, q.b, q.c, force=True)
    assert forced.forced
    assert forced.condition is not None and not forced.condition.all_hold


def test_reference_triple_conditions():
    q = reference_triple()
    assert not check_condition(q, "C5").all_hold
    assert not check_condition(q, "C6").all_hold
    # (ba)^D is zero because ba is nilpotent
    assert drazin_inverse(q.b @ q.a).inverse.is_zero()


def test_triples_reject_quadruple_conditions():
    q = reference_triple()
    for cid in ("C1", "C2", "C3", "NT"):
        with pytest.raises(DimensionMismatch):
            check_condition(q, cid)


def test_unknown_condition():
    with pytest.raises(ValueError):
        check_condition(load_fixture(), "C9")


def test_quadruple_validation():
    I2, I3 = Matrix.identity(QQ, 2), Matrix.identity(QQ, 3)
    with pytest.raises(DimensionMismatch):
        Quadruple(I2, I2, I3, I2)
    with pytest.raises(FieldMismatch):
        Quadruple(I2, I2, I2, Matrix.identity(GF(5), 2))
    with pytest.raises(DimensionMismatch):
        Quadruple(M([[1, 2]]), M([[1, 2]]), M([[1, 2]]))


def test_nilpotent_transfer_and_version_report():
    a = M([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    b = M([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    q = classic(a, b)
    tr = nilpotent_transfer(q)
    assert tr.ac_nilpotent and tr.bd_nilpotent and tr.consistent
    dv = drazin_version_check(q)
    assert dv.ok
    assert dv.cline_equal is True and dv.jacobson_equal is True


def test_formula_result_json():
    doc = cline_full(load_fixture()).to_json()
    assert doc["formula"] == "cline_full"
    assert doc["oracle_ok"] is True
    assert doc["condition"]["all_hold"] is True
    json.dumps(doc)


# ------------------------------------------------------------ properties

quadruple_fields = st.sampled_from([QQ, GF(2), GF(3), GF(5)])


@st.composite
def classic_quadruples(draw):
    F = draw(quadruple_fields)
    n = draw(st.integers(1, 3))
    a, b = draw(matrices(field=F, n=n)), draw(matrices(field=F, n=n))
    return classic(a, b)


@st.composite
def mosic_quadruples(draw):
    F = draw(quadruple_fields)
    spec = GenSpec(strategy="mosic", field=F, dim=draw(st.integers(1, 3)),
                   seed=draw(st.integers(0, 10**6)), entry_bound=2)
    return generate(spec)


@st.composite
def arbitrary_quadruples(draw):
    F = draw(quadruple_fields)
    n = draw(st.integers(1, 3))
    return Quadruple(*(draw(matrices(field=F, n=n, bound=2)) for _ in range(4)))


@settings(max_examples=60)
@given(st.one_of(classic_quadruples(), mosic_quadruples(), arbitrary_quadruples()))
def test_hierarchy_never_violated(q):
    assert condition_hierarchy_check(q).ok


@settings(max_examples=60)
@given(st.one_of(classic_quadruples(), mosic_quadruples()))
def test_cline_and_jacobson_hold_under_c1(q):
    assert check_condition(q, "C1").all_hold
    for fn in (cline_full, cline_two_condition, jacobson_gdrazin):
        r = fn(q)
        assert r.oracle_ok and r.matches_constructive, fn.__name__
    assert jacobson_proof_obligations(q).all_hold
    if nilpotent_transfer_applies(q):
        assert nilpotent_transfer(q).consistent


def nilpotent_transfer_applies(q):
    return check_condition(q, "NT").all_hold


@settings(max_examples=60)
@given(st.one_of(classic_quadruples(), mosic_quadruples()))
def test_group_formula_on_index_at_most_one(q):
    alpha = q.identity() - q.b @ q.d
    if drazin_inverse(alpha).index > 1:
        return
    r = jacobson_group(q)
    assert r.oracle_ok and r.extra["beta_index"] <= 1


@settings(max_examples=60)
@given(st.data())
def test_triple_formulas_on_aba_aca(data):
    F = data.draw(quadruple_fields)
    spec = GenSpec(strategy="aba-aca", field=F, dim=data.draw(st.integers(1, 3)),
                   seed=data.draw(st.integers(0, 10**6)), entry_bound=2)
    q = generate(spec)
    for cid in ("C4", "C5", "C6"):
        assert check_condition(q, cid).all_hold
    for fn in (cline_triple, jacobson_triple, cline_triple_c6):
        r = fn(q.a, q.b, q.c)
        assert r.oracle_ok and r.matches_constructive, fn.__name__


@settings(max_examples=40)
@given(arbitrary_quadruples())
def test_forced_formula_value_is_still_judged_by_oracle(q):
    r = cline_full(q, force=True)
    assert r.oracle_ok == verify_drazin_axioms(q.b @ q.d, r.value).ok
    assert r.forced == (not check_condition(q, "C1").all_hold)
