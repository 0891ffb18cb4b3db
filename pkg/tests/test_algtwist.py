import numpy as np
import pytest
from hypothesis import given, strategies as st

from twistco import zoo
from twistco.algtwist import (
    G,
    AlgTwist,
    G_inv,
    algebra_inverse,
    check_assoc,
    check_assoc_pentagons,
    compose_alg,
    compose_tw_alg,
    dualize,
    inclusion_report,
    inclusions,
    is_in_tw_alg,
    is_normal,
    is_z_normal,
    normalize,
    op_product,
    solve_unit,
    tw_unit_criterion,
    twisted_algebra,
    universal_omega_alg,
    unit_from_z,
    zero_divisor_witness,
)
from twistco.cotwist import Twist
from twistco.errors import DimensionMismatch, NoUnit, PreconditionFailed, ZNotOpInvertible
from twistco.linalg import Field, identity, kernel, rank
from twistco.structures import is_algebra_morphism, tensor_algebra

PAIRS = [("kC2", "kC3"), ("M2", "kC2"), ("H4", "kC2"), ("kC2", "M2")]
FIELDS = [Field(3), Field(5), Field()]
_CACHE = {}


def algebras(names, f):
    key = (names, f)
    if key not in _CACHE:
        _CACHE[key] = tuple(getattr(x, "algebra", x) for x in (zoo.get(n, f) for n in names))
    return _CACHE[key]


@st.composite
def elements(draw, pairs=PAIRS):
    f = draw(st.sampled_from(FIELDS))
    A, B = algebras(draw(st.sampled_from(pairs)), f)
    n = A.dim * B.dim
    return A, B, f.array(draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)))


@st.composite
def random_twists(draw):
    p = draw(st.sampled_from([2, 3]))
    A, B = algebras(("kC2", "kC2"), Field(p))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=16, max_size=16))
    return AlgTwist.from_matrix(A, B, np.array(entries).reshape(4, 4))


@pytest.mark.parametrize("names", PAIRS)
def test_flip_gives_tensor_algebra(names):
    A, B = algebras(names, Field())
    t = AlgTwist.flip(A, B)
    assert t.mul == tensor_algebra(A, B).mul
    assert is_normal(t) == (True, True)
    assert check_assoc(t).passed and check_assoc_pentagons(t).passed
    assert np.all(solve_unit(t) == tensor_algebra(A, B).one)


@given(random_twists())
def test_octagon_matches_direct_associativity(t):
    rep = check_assoc(t)
    assert rep.derived["associative"] == rep.passed


@given(random_twists())
def test_unit_agrees_with_z_normality(t):
    unit = solve_unit(t)
    if unit is not None and check_assoc(t).passed:
        assert unit_from_z(t, unit).passed
        assert is_z_normal(t, unit) == (True, True)


@given(elements())
def test_G_inverts_G_inv(data):
    A, B, u = data
    t = G_inv(A, B, u)
    assert np.all(G(t) == u)
    assert is_in_tw_alg(t).passed
    assert check_assoc(t).passed
    assert G_inv(A, B, G(t)) == t


@given(elements())
def test_unit_is_inverse_of_G(data):
    A, B, u = data
    res = tw_unit_criterion(G_inv(A, B, u))
    inv = algebra_inverse(tensor_algebra(A, B), u)
    assert res["unit_exists"] == (inv is not None)


@given(elements(pairs=[("kC2", "kC3"), ("M2", "kC2")]), st.data())
def test_composition_is_opposite_product(data, more):
    A, B, u = data
    n = A.dim * B.dim
    v = A.field.array(more.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)))
    composite = compose_tw_alg(G_inv(A, B, u), G_inv(A, B, v))
    assert np.all(G(composite) == op_product(A, B, u, v))


def test_normalize_and_inclusions():
    A, B = algebras(("kC2", "kC3"), Field())
    ta = twisted_algebra(G_inv(A, B, [2, 1, 0, 1, 0, 1]))
    assert inclusion_report(ta).passed
    tilde, mu = normalize(ta)
    assert is_normal(tilde) == (True, True)
    assert check_assoc(tilde).passed
    assert is_algebra_morphism(mu, twisted_algebra(tilde).as_algebra(), ta.as_algebra()).passed


def test_normalize_needs_op_invertible_unit():
    f = Field(2)
    A, B = algebras(("M2", "M2"), f)
    u = [1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0]
    ta = twisted_algebra(G_inv(A, B, u))
    assert ta.has_unit
    with pytest.raises(ZNotOpInvertible):
        normalize(ta)


def test_universal_property_of_normal_twist():
    A, B = algebras(("M2", "kC2"), Field())
    ta = twisted_algebra(AlgTwist.flip(A, B))
    X = ta.as_algebra()
    i_a, i_b, _, _ = inclusions(ta)
    assert universal_omega_alg(X, i_a, i_b, ta) == identity(X.space, X.field)


@pytest.mark.parametrize("f", [Field(), Field(3)], ids=lambda f: f.name)
def test_zero_divisor_witness(f):
    A, B = algebras(("kC2", "kC3"), f)
    t = G_inv(A, B, [1, -1, 0, 0, 0, 0])
    x, y = zero_divisor_witness(t)
    assert any(c != 0 for c in x) and any(c != 0 for c in y)
    product = t.mul.apply(f.kron(x.reshape(-1, 1), y.reshape(-1, 1)).reshape(-1))
    assert not any(c != 0 for c in product)
    assert zero_divisor_witness(AlgTwist.flip(A, B)) is None


def test_zero_divisors_without_pure_kernel_tensor():
    f = Field(2)
    A, B = algebras(("M2", "kC2"), f)
    t = G_inv(A, B, [0, 1, 1, 0, 0, 0, 0, 0])
    ker = kernel(t.psi.matrix, f)
    assert ker and all(rank(v.reshape(B.dim, A.dim), f) != 1 for v in ker)
    x, y = zero_divisor_witness(t)
    assert any(c != 0 for c in x) and any(c != 0 for c in y)
    product = t.mul.apply(f.kron(x.reshape(-1, 1), y.reshape(-1, 1)).reshape(-1))
    assert not any(c != 0 for c in product)


def test_compose_requires_associative_chi():
    f = Field()
    A, B = algebras(("kC2", "kC2"), f)
    bad = AlgTwist.from_matrix(A, B, np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert not check_assoc(bad).passed
    with pytest.raises(PreconditionFailed):
        compose_alg(bad, AlgTwist.flip(A, B))


def test_dual_product_is_transposed_coproduct(pairing_q):
    C, D = (x.coalgebra for x in pairing_q)
    t = Twist.flip(C, D)
    ta = dualize(t)
    assert ta.mul.matrix.tolist() == t.delta.matrix.T.tolist()
    assert np.all(solve_unit(ta.twist) == ta.unit)


def test_errors():
    f = Field()
    A, B = algebras(("kC2", "kC3"), f)
    with pytest.raises(DimensionMismatch):
        AlgTwist.from_matrix(A, B, f.eye(5))
    zero = AlgTwist.from_matrix(A, B, f.zeros((6, 6)))
    with pytest.raises(NoUnit):
        twisted_algebra(zero).require_unit()
