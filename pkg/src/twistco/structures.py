"""Finite-dimensional (co)algebras given by structure constants, and their axiom checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, FieldMismatch
from .linalg import (
    K,
    Field,
    LinMap,
    TensorSpace,
    flip,
    identity,
    permute,
    solve_linear,
    tensor,
)
from .report import Check, Report, compare


def _validate_space(space: TensorSpace, what: str):
    if len(space) != 1:
        raise DimensionMismatch(f"{what} must live on a single-factor space, got {space}")


@dataclass(frozen=True, eq=False)
class Coalgebra:
    name: str
    delta: LinMap
    counit: LinMap

    def __post_init__(self):
        if self.delta.codomain.dim != self.delta.domain.dim ** 2:
            raise DimensionMismatch(f"{self.name}: coproduct has codomain {self.delta.codomain}")
        if self.counit.domain.dim != self.delta.domain.dim or self.counit.codomain.dim != 1:
            raise DimensionMismatch(f"{self.name}: counit has shape {self.counit.shape}")
        if self.counit.field != self.delta.field:
            raise FieldMismatch(f"{self.name}: counit and coproduct over different fields")

    @classmethod
    def from_constants(cls, name: str, dim: int, delta: dict, counit, field: Field, label: str | None = None):
        """``delta`` maps a basis index to ``{(j, k): coeff}``; ``counit`` lists values."""
        space = TensorSpace.single(label or name, dim)
        d = LinMap.from_function(space, space * space, lambda src: delta.get(src[0], {}), field)
        e = LinMap(space, K, field.array([list(counit)]), field)
        return cls(name, d, e)

    @property
    def space(self) -> TensorSpace:
        return self.delta.domain

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self) -> Field:
        return self.delta.field

    @property
    def id(self) -> LinMap:
        return identity(self.space, self.field)

    @cached_property
    def dc(self) -> np.ndarray:
        """Coproduct constants ``dc[i, j, k]`` = coefficient of ``e_j⊗e_k`` in ``Δ(e_i)``."""
        n = self.dim
        return np.ascontiguousarray(self.delta.matrix.T.reshape(n, n, n))

    @cached_property
    def ec(self) -> np.ndarray:
        return np.ascontiguousarray(self.counit.matrix.reshape(-1))

    def __repr__(self) -> str:
        return f"Coalgebra({self.name}, dim={self.dim}, {self.field.name})"


@dataclass(frozen=True, eq=False)
class Algebra:
    name: str
    mul: LinMap
    unit: LinMap

    def __post_init__(self):
        n = self.mul.codomain.dim
        if self.mul.domain.dim != n * n:
            raise DimensionMismatch(f"{self.name}: product has domain {self.mul.domain}")
        if self.unit.codomain.dim != n or self.unit.domain.dim != 1:
            raise DimensionMismatch(f"{self.name}: unit has shape {self.unit.shape}")
        if self.unit.field != self.mul.field:
            raise FieldMismatch(f"{self.name}: unit and product over different fields")

    @classmethod
    def from_constants(cls, name: str, dim: int, mul: dict, unit, field: Field, label: str | None = None):
        """``mul`` maps ``(i, j)`` to ``{k: coeff}``; ``unit`` lists coefficients of 1."""
        space = TensorSpace.single(label or name, dim)
        m = LinMap.from_function(
            space * space, space, lambda src: {(k,): c for k, c in mul.get(tuple(src), {}).items()}, field
        )
        u = LinMap(K, space, field.array([[x] for x in unit]), field)
        return cls(name, m, u)

    @property
    def space(self) -> TensorSpace:
        return self.mul.codomain

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self) -> Field:
        return self.mul.field

    @property
    def id(self) -> LinMap:
        return identity(self.space, self.field)

    @cached_property
    def mc(self) -> np.ndarray:
        """Product constants ``mc[k, i, j]`` = coefficient of ``e_k`` in ``e_i e_j``."""
        n = self.dim
        return np.ascontiguousarray(self.mul.matrix.reshape(n, n, n))

    @cached_property
    def one(self) -> np.ndarray:
        return np.ascontiguousarray(self.unit.matrix.reshape(-1))

    def multiply(self, x, y) -> np.ndarray:
        """Product of two elements given as coefficient vectors."""
        f = self.field
        xy = f.kron(f.array(x).reshape(-1, 1), f.array(y).reshape(-1, 1))
        return f.matmul(self.mul.matrix, xy).reshape(-1)

    def __repr__(self) -> str:
        return f"Algebra({self.name}, dim={self.dim}, {self.field.name})"


@dataclass(frozen=True, eq=False)
class Bialgebra:
    name: str
    coalgebra: Coalgebra
    algebra: Algebra

    def __post_init__(self):
        if self.coalgebra.space != self.algebra.space:
            raise DimensionMismatch(f"{self.name}: coalgebra and algebra spaces differ")

    delta = property(lambda self: self.coalgebra.delta)
    counit = property(lambda self: self.coalgebra.counit)
    mul = property(lambda self: self.algebra.mul)
    unit = property(lambda self: self.algebra.unit)
    space = property(lambda self: self.coalgebra.space)
    dim = property(lambda self: self.coalgebra.dim)
    field = property(lambda self: self.coalgebra.field)
    id = property(lambda self: self.coalgebra.id)
    dc = property(lambda self: self.coalgebra.dc)
    ec = property(lambda self: self.coalgebra.ec)
    mc = property(lambda self: self.algebra.mc)
    one = property(lambda self: self.algebra.one)

    def multiply(self, x, y):
        return self.algebra.multiply(x, y)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, dim={self.dim}, {self.field.name})"


@dataclass(frozen=True, eq=False)
class HopfAlgebra(Bialgebra):
    antipode: LinMap = None

    def __post_init__(self):
        super().__post_init__()
        if self.antipode is None or self.antipode.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"{self.name}: antipode missing or misshapen")


@dataclass(frozen=True, eq=False)
class Pairing:
    C: Bialgebra
    D: Bialgebra
    form: LinMap


# -- axiom checks -------------------------------------------------------------


def check_coassociativity(delta: LinMap) -> Check:
    """(Δ⊗id)Δ = (id⊗Δ)Δ for a map ``V -> V⊗V`` where V may be a tensor product."""
    V = delta.domain
    I = identity(V, delta.field)
    return compare("coassociativity", tensor(delta, I) @ delta, tensor(I, delta) @ delta)


def check_counit(delta: LinMap, counit: LinMap) -> list[Check]:
    V = delta.domain
    I = identity(V, delta.field)
    return [
        compare("counit_left", tensor(counit, I) @ delta, I),
        compare("counit_right", tensor(I, counit) @ delta, I),
    ]


def check_associativity(mul: LinMap) -> Check:
    V = mul.codomain
    I = identity(V, mul.field)
    return compare("associativity", mul @ tensor(mul, I), mul @ tensor(I, mul))


def check_unit(mul: LinMap, unit: LinMap) -> list[Check]:
    V = mul.codomain
    I = identity(V, mul.field)
    return [
        compare("unit_left", mul @ tensor(unit, I), I),
        compare("unit_right", mul @ tensor(I, unit), I),
    ]


def check_coalgebra(C) -> Report:
    rep = Report(f"coalgebra {C.name}")
    rep.add(check_coassociativity(C.delta))
    for c in check_counit(C.delta, C.counit):
        rep.add(c)
    return rep


def check_algebra(A) -> Report:
    rep = Report(f"algebra {A.name}")
    rep.add(check_associativity(A.mul))
    for c in check_unit(A.mul, A.unit):
        rep.add(c)
    return rep


def check_bialgebra(B: Bialgebra) -> Report:
    rep = Report(f"bialgebra {B.name}")
    rep.extend(check_coalgebra(B.coalgebra))
    rep.extend(check_algebra(B.algebra))
    f, V = B.field, B.space
    m2 = tensor(B.mul, B.mul) @ permute(V ** 4, (0, 2, 1, 3), f)
    rep.add(compare("delta_multiplicative", B.delta @ B.mul, m2 @ tensor(B.delta, B.delta)))
    rep.add(compare("counit_multiplicative", B.counit @ B.mul, tensor(B.counit, B.counit)))
    rep.add(compare("delta_unit", B.delta @ B.unit, tensor(B.unit, B.unit)))
    rep.add(compare("counit_unit", B.counit @ B.unit, identity(K, f)))
    return rep


def check_antipode(B: Bialgebra, S: LinMap) -> list[Check]:
    I = B.id
    target = B.unit @ B.counit
    return [
        compare("antipode_left", B.mul @ tensor(S, I) @ B.delta, target),
        compare("antipode_right", B.mul @ tensor(I, S) @ B.delta, target),
    ]


def check_hopf(H: HopfAlgebra) -> Report:
    rep = Report(f"hopf {H.name}")
    rep.extend(check_bialgebra(H))
    for c in check_antipode(H, H.antipode):
        rep.add(c)
    return rep


def compute_antipode(B: Bialgebra) -> LinMap | None:
    """Solve m(S⊗id)Δ = ηε = m(id⊗S)Δ jointly for S; ``None`` if unsolvable."""
    f, n = B.field, B.dim
    dc, mc = B.dc, B.mc
    # unknowns S[k, i] flattened as k*n + i; equations indexed by (h, l)
    left = np.einsum("hij,lkj->hlki", dc, mc)
    right = np.einsum("hij,lik->hlkj", dc, mc)
    A = np.concatenate([left.reshape(n * n, n * n), right.reshape(n * n, n * n)], axis=0)
    A = f.array(A)
    target = np.einsum("l,h->hl", B.one, B.ec).reshape(-1)
    rhs = np.concatenate([target, target])
    x = solve_linear(A, rhs, f)
    if x is None:
        return None
    S = LinMap(B.space, B.space, x.reshape(n, n), f)
    if not all(c.passed for c in check_antipode(B, S)):
        return None
    return S


def with_antipode(B: Bialgebra) -> HopfAlgebra | None:
    S = compute_antipode(B)
    if S is None:
        return None
    return HopfAlgebra(B.name, B.coalgebra, B.algebra, S)


# -- constructions ------------------------------------------------------------


def tensor_coalgebra(C, D, name: str | None = None) -> Coalgebra:
    """(C⊗D, (id⊗τ⊗id)(Δ_C⊗Δ_D), ε_C⊗ε_D)."""
    if C.field != D.field:
        raise FieldMismatch(f"{C.field.name} vs {D.field.name}")
    f = C.field
    mid = tensor(C.id, flip(C.space, D.space, f), D.id)
    delta = mid @ tensor(C.delta, D.delta)
    return Coalgebra(name or f"{C.name}⊗{D.name}", delta, tensor(C.counit, D.counit))


def tensor_algebra(A, B, name: str | None = None) -> Algebra:
    """(A⊗B, (m_A⊗m_B)(id⊗τ⊗id), η_A⊗η_B)."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field.name} vs {B.field.name}")
    f = A.field
    mid = tensor(A.id, flip(B.space, A.space, f), B.id)
    return Algebra(name or f"{A.name}⊗{B.name}", tensor(A.mul, B.mul) @ mid, tensor(A.unit, B.unit))


def opposite_coalgebra(C) -> Coalgebra:
    name = C.name[:-4] if C.name.endswith("^cop") else C.name + "^cop"
    return Coalgebra(name, flip(C.space, C.space, C.field) @ C.delta, C.counit)


def opposite_algebra(A) -> Algebra:
    name = A.name[:-3] if A.name.endswith("^op") else A.name + "^op"
    return Algebra(name, A.mul @ flip(A.space, A.space, A.field), A.unit)


def is_coalgebra_morphism(f: LinMap, C, D) -> Report:
    rep = Report(f"coalgebra morphism {C.name} -> {D.name}")
    rep.add(compare("delta", D.delta @ f, tensor(f, f) @ C.delta))
    rep.add(compare("counit", D.counit @ f, C.counit))
    return rep


def is_algebra_morphism(f: LinMap, A, B) -> Report:
    rep = Report(f"algebra morphism {A.name} -> {B.name}")
    rep.add(compare("mul", f @ A.mul, B.mul @ tensor(f, f)))
    rep.add(compare("unit", f @ A.unit, B.unit))
    return rep


def check_pairing(P: Pairing) -> Report:
    C, D, form = P.C, P.D, P.form
    f = C.field
    rep = Report(f"pairing {C.name} x {D.name}")
    swap_mid = permute(C.space * C.space * D.space * D.space, (0, 2, 1, 3), f)
    ff = tensor(form, form) @ swap_mid
    rep.add(compare("mul_in_first", form @ tensor(C.mul, D.id), ff @ tensor(C.id, C.id, D.delta)))
    rep.add(compare("mul_in_second", form @ tensor(C.id, D.mul), ff @ tensor(C.delta, D.id, D.id)))
    rep.add(compare("unit_first", form @ tensor(C.unit, D.id), D.counit))
    rep.add(compare("unit_second", form @ tensor(C.id, D.unit), C.counit))
    return rep
