"""Twist maps C⊗D→D⊗C and the twisted coproduct they induce."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, InvariantViolation, NoCounit, NotMorphism
from .functionals import Functional, functional_twist_map, star_inverse
from .linalg import (
    K,
    Field,
    LinMap,
    compose,
    flip,
    invert,
    kernel,
    solve_linear,
    tensor,
    zero_map,
)
from .report import Report, compare
from .structures import Coalgebra, check_coassociativity, is_coalgebra_morphism


@dataclass(frozen=True, eq=False)
class Twist:
    """A linear map Ψ: C⊗D → D⊗C."""

    C: object
    D: object
    psi: LinMap

    def __post_init__(self):
        C, D, psi = self.C, self.D, self.psi
        if C.field != D.field or psi.field != C.field:
            raise FieldMismatch("twist and coalgebras must share a field")
        dom, cod = C.space * D.space, D.space * C.space
        if psi.shape != (cod.dim, dom.dim):
            raise DimensionMismatch(f"twist matrix {psi.shape} does not fit {dom} -> {cod}")
        if psi.domain != dom or psi.codomain != cod:
            object.__setattr__(self, "psi", psi.relabel(dom, cod))

    @classmethod
    def flip(cls, C, D) -> "Twist":
        return cls(C, D, flip(C.space, D.space, C.field))

    @classmethod
    def zero(cls, C, D) -> "Twist":
        return cls(C, D, zero_map(C.space * D.space, D.space * C.space, C.field))

    @classmethod
    def from_matrix(cls, C, D, matrix) -> "Twist":
        return cls(C, D, LinMap(C.space * D.space, D.space * C.space, C.field.array(matrix), C.field))

    @classmethod
    def from_tensor(cls, C, D, arr) -> "Twist":
        """``arr[i, j, k, l]`` is the coefficient of ``d_k⊗c_l`` in ``Ψ(c_i⊗d_j)``."""
        arr = np.asarray(arr)
        nC, nD = C.dim, D.dim
        mat = arr.reshape(nC * nD, nD * nC).T
        return cls.from_matrix(C, D, mat)

    @property
    def field(self) -> Field:
        return self.C.field

    @cached_property
    def psi_prime(self) -> LinMap:
        """Ψ' = Ψ∘τ on D⊗C."""
        return self.psi @ flip(self.D.space, self.C.space, self.field)

    @cached_property
    def tensor(self) -> np.ndarray:
        nC, nD = self.C.dim, self.D.dim
        return np.ascontiguousarray(self.psi.matrix.T.reshape(nC, nD, nD, nC))

    @cached_property
    def delta(self) -> LinMap:
        return twisted_coproduct(self)

    def is_flip(self) -> bool:
        return self.psi == flip(self.C.space, self.D.space, self.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Twist):
            return NotImplemented
        return self.C is other.C and self.D is other.D and self.psi == other.psi

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"Twist({self.C.name}⊗{self.D.name} over {self.field.name})"


def twisted_coproduct(t: Twist) -> LinMap:
    """Δ_Ψ = (id_C⊗Ψ⊗id_D)(Δ_C⊗Δ_D)."""
    C, D = t.C, t.D
    return tensor(C.id, t.psi, D.id) @ tensor(C.delta, D.delta)


def octagon_sides(t: Twist) -> tuple[LinMap, LinMap]:
    """The two composites C⊗D → D⊗C⊗D⊗C whose equality is the octagon condition."""
    C, D, psi = t.C, t.D, t.psi
    lhs = compose(
        tensor(D.id, C.id, psi),
        tensor(D.id, C.delta, D.id),
        tensor(psi, D.id),
        tensor(C.id, D.delta),
    )
    rhs = compose(
        tensor(psi, D.id, C.id),
        tensor(C.id, D.delta, C.id),
        tensor(C.id, psi),
        tensor(C.delta, D.id),
    )
    return lhs, rhs


def check_octagon(t: Twist, cross_check: bool = True) -> Report:
    """Octagon identity; with ``cross_check`` the direct coassociativity of Δ_Ψ must agree."""
    rep = Report("octagon")
    lhs, rhs = octagon_sides(t)
    oct_check = rep.add(compare("octagon", lhs, rhs))
    if cross_check:
        direct = check_coassociativity(t.delta)
        rep.derived["coassociative"] = direct.passed
        if direct.passed != oct_check.passed:
            raise InvariantViolation(
                f"octagon ({oct_check.passed}) and direct coassociativity ({direct.passed}) disagree"
            )
    return rep


def check_pentagons(t: Twist) -> Report:
    C, D, psi = t.C, t.D, t.psi
    rep = Report("pentagons")
    rep.add(compare(
        "pentagon1",
        compose(tensor(D.id, psi), tensor(psi, D.id), tensor(C.id, D.delta)),
        tensor(D.delta, C.id) @ psi,
    ))
    rep.add(compare(
        "pentagon2",
        compose(tensor(psi, C.id), tensor(C.id, psi), tensor(C.delta, D.id)),
        tensor(D.id, C.delta) @ psi,
    ))
    return rep


def conormality_report(t: Twist) -> Report:
    C, D, psi = t.C, t.D, t.psi
    rep = Report("conormal")
    rep.add(compare("left", tensor(D.id, C.counit) @ psi, tensor(C.counit, D.id)))
    rep.add(compare("right", tensor(D.counit, C.id) @ psi, tensor(C.id, D.counit)))
    return rep


def is_conormal(t: Twist) -> tuple[bool, bool]:
    rep = conormality_report(t)
    return rep["left"].passed, rep["right"].passed


def counit_from_Z(t: Twist, Z: LinMap) -> Functional:
    """ε_Z = (ε_D⊗ε_C)∘Z."""
    _check_z(t, Z)
    return Functional.from_map(t.C, t.D, tensor(t.D.counit, t.C.counit) @ Z)


def _check_z(t: Twist, Z: LinMap):
    if Z.shape != t.psi.shape:
        raise DimensionMismatch(f"Z has shape {Z.shape}, expected {t.psi.shape}")


def z_conormality_report(t: Twist, Z: LinMap) -> Report:
    _check_z(t, Z)
    C, D, psi = t.C, t.D, t.psi
    eps_z = counit_from_Z(t, Z).map
    rep = Report("z_conormal")
    rep.add(compare(
        "left",
        compose(tensor(D.id, eps_z), tensor(psi, D.id), tensor(C.id, D.delta)),
        tensor(C.counit, D.id),
    ))
    rep.add(compare(
        "right",
        compose(tensor(eps_z, C.id), tensor(C.id, psi), tensor(C.delta, D.id)),
        tensor(C.id, D.counit),
    ))
    return rep


def is_z_conormal(t: Twist, Z: LinMap) -> tuple[bool, bool]:
    rep = z_conormality_report(t, Z)
    return rep["left"].passed, rep["right"].passed


def counit_system(delta: LinMap) -> tuple[np.ndarray, np.ndarray]:
    """Linear system whose solutions are counits of ``delta``."""
    f = delta.field
    n = delta.domain.dim
    m3 = delta.matrix.reshape(n, n, n)  # m3[a, b, j]: coefficient of e_a⊗e_b in Δ(e_j)
    left = np.transpose(m3, (1, 2, 0)).reshape(n * n, n)
    right = np.transpose(m3, (0, 2, 1)).reshape(n * n, n)
    A = np.concatenate([left, right], axis=0)
    eye = f.eye(n).reshape(-1)
    return A, np.concatenate([eye, eye])


def solve_counit_map(delta: LinMap) -> LinMap | None:
    """The unique ε with (ε⊗id)Δ = id = (id⊗ε)Δ, as a map V → k, or ``None``."""
    f = delta.field
    A, b = counit_system(delta)
    x = solve_linear(A, b, f)
    if x is None:
        return None
    if kernel(A, f):
        raise InvariantViolation("counit solution space is not a single point")
    return LinMap(delta.domain, K, x.reshape(1, -1), f)


def solve_counit(obj) -> Functional | LinMap | None:
    """Counit of a twisted coproduct.

    Given a ``Twist`` or ``TwistedCoalgebra`` the result is a ``Functional``;
    given a bare coproduct map it is a ``LinMap`` to the ground field.
    """
    if isinstance(obj, LinMap):
        return solve_counit_map(obj)
    t = obj.twist if isinstance(obj, TwistedCoalgebra) else obj
    m = solve_counit_map(t.delta)
    return None if m is None else Functional.from_map(t.C, t.D, m)


def z_witness(eps: Functional) -> LinMap:
    """A Z with ε_Z equal to the given functional: Z(c⊗d) = ε(c₁⊗d₂) d₁⊗c₂."""
    return functional_twist_map(eps)


@dataclass(frozen=True, eq=False)
class TwistedCoalgebra:
    twist: Twist
    delta: LinMap
    counit: Functional | None
    z: LinMap | None

    @property
    def C(self):
        return self.twist.C

    @property
    def D(self):
        return self.twist.D

    @property
    def field(self) -> Field:
        return self.twist.field

    @property
    def has_counit(self) -> bool:
        return self.counit is not None

    def require_counit(self) -> Functional:
        if self.counit is None:
            raise NoCounit(f"{self.twist!r} admits no counit")
        return self.counit

    def as_coalgebra(self, name: str | None = None) -> Coalgebra:
        eps = self.require_counit()
        return Coalgebra(name or f"{self.C.name}⊗_Ψ{self.D.name}", self.delta, eps.map)


def twisted_coalgebra(t: Twist) -> TwistedCoalgebra:
    eps = solve_counit(t)
    z = z_witness(eps) if eps is not None else None
    return TwistedCoalgebra(t, t.delta, eps, z)


def _as_tc(obj) -> TwistedCoalgebra:
    return obj if isinstance(obj, TwistedCoalgebra) else twisted_coalgebra(obj)


def projections(tc) -> tuple[LinMap, LinMap]:
    """p_C = (id_C⊗ε_Ψ)(Δ_C⊗id_D) and p_D = (ε_Ψ⊗id_D)(id_C⊗Δ_D)."""
    tc = _as_tc(tc)
    eps = tc.require_counit().map
    C, D = tc.C, tc.D
    p_c = tensor(C.id, eps) @ tensor(C.delta, D.id)
    p_d = tensor(eps, D.id) @ tensor(C.id, D.delta)
    return p_c, p_d


def pi_projections(C, D) -> tuple[LinMap, LinMap]:
    return tensor(C.id, D.counit), tensor(C.counit, D.id)


def mu_map(tc) -> LinMap:
    """μ = (p_C⊗p_D)Δ_Ψ."""
    tc = _as_tc(tc)
    p_c, p_d = projections(tc)
    return tensor(p_c, p_d) @ tc.delta


def conormalize(tc) -> tuple[Twist, LinMap] | None:
    """(Ψ̃, μ) with Ψ̃ = (p_D⊗p_C)Δ_Ψμ⁻¹, or ``None`` when μ is singular."""
    tc = _as_tc(tc)
    p_c, p_d = projections(tc)
    mu = tensor(p_c, p_d) @ tc.delta
    mu_inv = invert(mu)
    if mu_inv is None:
        return None
    psi_tilde = compose(tensor(p_d, p_c), tc.delta, mu_inv)
    return Twist(tc.C, tc.D, psi_tilde), mu


def mu_star_criterion(tc) -> tuple[bool, bool]:
    """(ε_Ψ is ⋆-invertible, μ is invertible); the two always agree."""
    tc = _as_tc(tc)
    eps = tc.require_counit()
    return star_inverse(eps) is not None, invert(mu_map(tc)) is not None


def check_omega_hypotheses(Y, u_c: LinMap, u_d: LinMap, tc) -> Report:
    tc = _as_tc(tc)
    eps = tc.require_counit().map
    omega = tensor(u_c, u_d) @ Y.delta
    rep = Report("omega_hypotheses")
    rep.add(compare("twist_intertwines", tensor(u_d, u_c) @ Y.delta, tc.twist.psi @ omega))
    rep.add(compare("counit", eps @ omega, Y.counit))
    return rep


def universal_omega(Y, u_c: LinMap, u_d: LinMap, tc) -> LinMap | None:
    """ω = (u_C⊗u_D)Δ_Y when the compatibility hypotheses hold, else ``None``."""
    tc = _as_tc(tc)
    for u, target in ((u_c, tc.C), (u_d, tc.D)):
        if not is_coalgebra_morphism(u, Y, target).passed:
            raise NotMorphism(f"{u!r} is not a coalgebra morphism {Y.name} -> {target.name}")
    if not check_omega_hypotheses(Y, u_c, u_d, tc).passed:
        return None
    omega = tensor(u_c, u_d) @ Y.delta
    p_c, p_d = projections(tc)
    if p_c @ omega != u_c or p_d @ omega != u_d:
        raise InvariantViolation("ω does not factor the given morphisms")
    target = tc.as_coalgebra()
    if check_octagon(tc.twist, cross_check=False).passed and not is_coalgebra_morphism(omega, Y, target).passed:
        raise InvariantViolation("ω is not a coalgebra morphism")
    return omega


def omega_uniqueness(tc) -> dict:
    """μ injective guarantees a unique ω; otherwise report the kernel dimension of μ."""
    mu = mu_map(tc)
    ker = kernel(mu)
    return {"mu_injective": not ker, "mu_kernel_dim": len(ker)}


def factorization_twist(Y, u_c: LinMap, u_d: LinMap, C, D) -> Twist | None:
    """Ψ = (u_D⊗u_C)Δ_Y η⁻¹ with η = (u_C⊗u_D)Δ_Y; ``None`` when η is not invertible."""
    for u, target in ((u_c, C), (u_d, D)):
        if not is_coalgebra_morphism(u, Y, target).passed:
            raise NotMorphism(f"{u!r} is not a coalgebra morphism {Y.name} -> {target.name}")
    eta = tensor(u_c, u_d) @ Y.delta
    if eta.shape[0] != eta.shape[1]:
        return None
    eta_inv = invert(eta)
    if eta_inv is None:
        return None
    t = Twist(C, D, compose(tensor(u_d, u_c), Y.delta, eta_inv))
    if is_conormal(t) != (True, True) or not check_octagon(t, cross_check=False).passed:
        raise InvariantViolation("factorization produced a non-conormal or non-coassociative twist")
    return t
