"""Linear functionals on C⊗D with the convolution (∗) and star (⋆) products."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SpaceMismatch
from .linalg import K, Field, LinMap, TensorSpace, compose, permute, solve_linear, tensor
from .structures import opposite_coalgebra, tensor_coalgebra


@dataclass(frozen=True, eq=False)
class Functional:
    C: object
    D: object
    coeffs: np.ndarray

    def __post_init__(self):
        f = self.C.field
        vec = f.array(self.coeffs).reshape(-1)
        if vec.shape[0] != self.C.dim * self.D.dim:
            raise SpaceMismatch(f"expected {self.C.dim * self.D.dim} coefficients, got {vec.shape[0]}")
        vec.setflags(write=False)
        object.__setattr__(self, "coeffs", vec)

    @classmethod
    def from_map(cls, C, D, m: LinMap) -> "Functional":
        return cls(C, D, m.matrix.reshape(-1))

    @classmethod
    def from_function(cls, C, D, fn) -> "Functional":
        """``fn(i, j)`` gives the value on ``c_i⊗d_j``."""
        return cls(C, D, [fn(i, j) for i in range(C.dim) for j in range(D.dim)])

    @property
    def field(self) -> Field:
        return self.C.field

    @property
    def space(self) -> TensorSpace:
        return self.C.space * self.D.space

    @property
    def map(self) -> LinMap:
        return LinMap(self.space, K, self.coeffs.reshape(1, -1), self.field)

    def __call__(self, i: int, j: int):
        return self.coeffs[i * self.D.dim + j]

    def table(self) -> list[list]:
        return [[self(i, j) for j in range(self.D.dim)] for i in range(self.C.dim)]

    def _same(self, other: "Functional"):
        if other.C is not self.C or other.D is not self.D:
            raise SpaceMismatch("functionals live on different spaces")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return other.C is self.C and other.D is self.D and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __add__(self, other: "Functional") -> "Functional":
        self._same(other)
        return Functional(self.C, self.D, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "Functional") -> "Functional":
        self._same(other)
        return Functional(self.C, self.D, self.field.sub(self.coeffs, other.coeffs))

    def scale(self, c) -> "Functional":
        return Functional(self.C, self.D, self.field.scale(c, self.coeffs))

    def __mul__(self, other: "Functional") -> "Functional":
        return conv_mul(self, other)

    def strings(self) -> list[str]:
        return [self.field.fmt(x) for x in self.coeffs]

    def __repr__(self) -> str:
        return f"Functional({self.C.name}⊗{self.D.name}: [{', '.join(self.strings())}])"


@lru_cache(maxsize=128)
def _coproduct(C, D, cop: bool) -> LinMap:
    left = opposite_coalgebra(C) if cop else C
    return tensor_coalgebra(left, D).delta


def tensor_coproduct(C, D) -> LinMap:
    """Δ_⊗ on C⊗D."""
    return _coproduct(C, D, False)


def epsilon_tensor(C, D) -> Functional:
    return Functional.from_map(C, D, tensor(C.counit, D.counit))


def _product(phi: Functional, psi: Functional, cop: bool) -> Functional:
    phi._same(psi)
    delta = _coproduct(phi.C, phi.D, cop)
    return Functional.from_map(phi.C, phi.D, tensor(phi.map, psi.map) @ delta)


def conv_mul(phi: Functional, psi: Functional) -> Functional:
    """(φ∗ψ)(c⊗d) = φ(c₁⊗d₁) ψ(c₂⊗d₂)."""
    return _product(phi, psi, False)


def star_mul(phi: Functional, psi: Functional) -> Functional:
    """(φ⋆ψ)(c⊗d) = φ(c₂⊗d₁) ψ(c₁⊗d₂)."""
    return _product(phi, psi, True)


def _inverse(phi: Functional, cop: bool) -> Functional | None:
    C, D = phi.C, phi.D
    delta = _coproduct(C, D, cop)
    V = phi.space
    ident = LinMap(V, V, phi.field.eye(V.dim), phi.field)
    # φ·x = x∘T with T = (φ⊗id)Δ; solve the row system x T = ε.
    T = tensor(phi.map, ident) @ delta
    unit = epsilon_tensor(C, D)
    x = solve_linear(T.matrix.T, unit.coeffs, phi.field)
    if x is None:
        return None
    inv = Functional(C, D, x)
    if _product(inv, phi, cop) != unit or _product(phi, inv, cop) != unit:
        return None
    return inv


def conv_inverse(phi: Functional) -> Functional | None:
    """Two-sided inverse for ∗, or ``None``."""
    return _inverse(phi, False)


def star_inverse(phi: Functional) -> Functional | None:
    """Two-sided inverse for ⋆, or ``None``."""
    return _inverse(phi, True)


def functional_twist_map(phi: Functional) -> LinMap:
    """The map C⊗D→D⊗C, c⊗d ↦ φ(c₁⊗d₂) d₁⊗c₂."""
    C, D, f = phi.C, phi.D, phi.field
    split = tensor(C.delta, D.delta)  # c1 c2 d1 d2
    order = permute(C.space * C.space * D.space * D.space, (0, 3, 2, 1), f)  # c1 d2 d1 c2
    ident = LinMap(D.space * C.space, D.space * C.space, f.eye(D.dim * C.dim), f)
    return compose(tensor(phi.map, ident), order, split)
