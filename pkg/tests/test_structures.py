import pytest

import oracles
from twistco import zoo
from twistco.errors import FieldMismatch, NotAGroup
from twistco.linalg import Field, compose, identity
from twistco.structures import (
    Algebra,
    Bialgebra,
    Coalgebra,
    HopfAlgebra,
    check_algebra,
    check_coalgebra,
    check_hopf,
    check_pairing,
    compute_antipode,
    opposite_algebra,
    opposite_coalgebra,
    tensor_algebra,
    tensor_coalgebra,
)

FIELDS = [Field(), Field(3), Field(5)]


def _check(obj):
    if isinstance(obj, HopfAlgebra):
        return check_hopf(obj)
    if isinstance(obj, Bialgebra):
        return check_coalgebra(obj.coalgebra), check_algebra(obj.algebra)
    if isinstance(obj, Coalgebra):
        return check_coalgebra(obj)
    return check_algebra(obj)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.name)
@pytest.mark.parametrize("name", [n for n, _ in zoo.list_zoo()])
def test_zoo_axioms(name, f):
    reports = _check(zoo.get(name, f))
    for rep in reports if isinstance(reports, tuple) else (reports,):
        assert rep.passed, rep.failures()


def test_h4_needs_odd_characteristic():
    with pytest.raises(FieldMismatch):
        zoo.get("H4", Field(2))


@pytest.mark.parametrize("name", ["kC3", "k^C3", "kS3", "k^S3", "H4", "kV4"])
def test_solved_antipode_matches(name):
    H = zoo.get(name, Field())
    assert compute_antipode(H) == H.antipode


def test_h4_antipode_order_four():
    H = zoo.get("H4", Field())
    S = H.antipode
    assert compose(S, S) != H.id
    assert compose(S, S, S, S) == H.id


def test_group_algebra_of_s3_is_noncommutative():
    H = zoo.get("kS3", Field())
    assert opposite_algebra(H.algebra).mul != H.mul


@pytest.mark.parametrize("bad", [[[0, 1], [0, 1]], [[0, 1], [1, 1]], [[0, 1, 2], [1, 2, 0], [2, 1, 0]]])
def test_non_groups_rejected(bad):
    with pytest.raises(NotAGroup):
        zoo.validate_group(bad)


@pytest.mark.parametrize("n", [2, 3])
def test_constants_match_hand_tables(n):
    f = Field()
    assert zoo.get(f"kC{n}", f).dc.tolist() == oracles.grouplike_table(n)
    assert zoo.get(f"k^C{n}", f).dc.tolist() == oracles.function_table(n)
    assert zoo.get(f"Mc{n}", f).dc.tolist() == oracles.matrix_coalgebra_table(n)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.name)
def test_group_dual_pairing(f):
    P = zoo.group_dual_pairing(zoo.cyclic_group(3), f)
    assert check_pairing(P).passed


def test_tensor_and_opposite_constructions():
    f = Field(3)
    H, M = zoo.get("H4", f), zoo.get("Mc2", f)
    assert check_coalgebra(tensor_coalgebra(H.coalgebra, M)).passed
    assert check_coalgebra(opposite_coalgebra(H.coalgebra)).passed
    assert opposite_coalgebra(H.coalgebra).delta != H.delta
    assert check_algebra(tensor_algebra(H.algebra, zoo.get("M2", f))).passed


def test_broken_coalgebra_detected():
    f = Field()
    C = Coalgebra.from_constants("bad", 2, {0: {(0, 1): 1}, 1: {(1, 1): 1}}, [1, 1], f)
    rep = check_coalgebra(C)
    assert not rep.passed


def test_broken_algebra_detected():
    f = Field()
    A = Algebra.from_constants("bad", 2, {(0, 0): {0: 1}, (1, 1): {0: 1}}, [0, 1], f)
    assert not check_algebra(A).passed


def test_identity_is_coalgebra_endomorphism():
    from twistco.structures import is_coalgebra_morphism

    C = zoo.get("Mc2", Field())
    assert is_coalgebra_morphism(identity(C.space, C.field), C, C).passed
