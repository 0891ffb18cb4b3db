"""Twists that are comodule morphisms, their functionals, and derived constructions.

A twist Ψ lies in Tw when Ψ' = Ψτ commutes with the left D- and right
C-coactions on D⊗C.  Such twists correspond one-to-one with functionals on
C⊗D via F(Ψ) = (ε_D⊗ε_C)Ψ, and composition of Ψ' maps corresponds to the
⋆-product of functionals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cotwist import (
    Twist,
    check_octagon,
    conormalize,
    is_conormal,
    projections,
    solve_counit,
    twisted_coalgebra,
)
from .errors import (
    AxiomFailure,
    InvariantViolation,
    NotAnAction,
    NotInTw,
    NotInvertible,
    PreconditionFailed,
)
from .functionals import (
    Functional,
    conv_inverse,
    epsilon_tensor,
    functional_twist_map,
    star_mul,
    tensor_coproduct,
)
from .linalg import LinMap, compose, flip, identity, invert, permute, tensor
from .report import Check, Report, compare


@dataclass(frozen=True, eq=False)
class TwTwist:
    twist: Twist
    phi: Functional

    C = property(lambda self: self.twist.C)
    D = property(lambda self: self.twist.D)
    psi = property(lambda self: self.twist.psi)
    psi_prime = property(lambda self: self.twist.psi_prime)
    field = property(lambda self: self.twist.field)

    def __repr__(self) -> str:
        return f"TwTwist({self.phi!r})"


def _twist(t) -> Twist:
    return t.twist if isinstance(t, TwTwist) else t


def tw_report(t) -> Report:
    """Membership in Tw, checked both in coaction form and in counit-reduced form."""
    t = _twist(t)
    C, D, pp = t.C, t.D, t.psi_prime
    rep = Report("tw_membership")
    lc1 = rep.add(compare("LC1", tensor(D.delta, C.id) @ pp, tensor(D.id, pp) @ tensor(D.delta, C.id)))
    lc2 = rep.add(compare("LC2", tensor(D.id, C.delta) @ pp, tensor(pp, C.id) @ tensor(D.id, C.delta)))
    e1 = rep.add(compare(
        "eLC1", pp, compose(tensor(D.id, D.counit, C.id), tensor(D.id, pp), tensor(D.delta, C.id))
    ))
    e2 = rep.add(compare(
        "eLC2", pp, compose(tensor(D.id, C.counit, C.id), tensor(pp, C.id), tensor(D.id, C.delta))
    ))
    if lc1.passed != e1.passed or lc2.passed != e2.passed:
        raise InvariantViolation("coaction and counit-reduced membership conditions disagree")
    return rep


def is_in_tw(t) -> Report:
    return tw_report(t)


def F(t) -> Functional:
    """φ_Ψ = (ε_D⊗ε_C)∘Ψ; raises ``NotInTw`` outside Tw."""
    tt = _twist(t)
    if not isinstance(t, TwTwist) and not tw_report(tt).passed:
        raise NotInTw(f"{tt!r} is not a comodule morphism")
    return Functional.from_map(tt.C, tt.D, tensor(tt.D.counit, tt.C.counit) @ tt.psi)


def F_inv(phi: Functional) -> TwTwist:
    """Ψ_φ(c⊗d) = φ(c₁⊗d₂) d₁⊗c₂."""
    return TwTwist(Twist(phi.C, phi.D, functional_twist_map(phi)), phi)


def as_tw(t: Twist) -> TwTwist:
    return TwTwist(t, F(t))


def tw_compose(t1, t2) -> TwTwist:
    """The twist whose Ψ' is Ψ'₁∘Ψ'₂; its functional is F(t₁)⋆F(t₂)."""
    a, b = _twist(t1), _twist(t2)
    pp = a.psi_prime @ b.psi_prime
    psi = pp @ flip(a.C.space, a.D.space, a.field)
    out = Twist(a.C, a.D, psi)
    phi1 = t1.phi if isinstance(t1, TwTwist) else F(a)
    phi2 = t2.phi if isinstance(t2, TwTwist) else F(b)
    return TwTwist(out, star_mul(phi1, phi2))


def delta_phi(phi: Functional) -> LinMap:
    """Δ_φ(c⊗d) = φ(c₂⊗d₂) c₁⊗d₁⊗c₃⊗d₃, built independently of the twist."""
    C, D, f = phi.C, phi.D, phi.field
    d2c = tensor(C.delta, C.id) @ C.delta
    d2d = tensor(D.delta, D.id) @ D.delta
    space = C.space ** 3 * D.space ** 3
    order = permute(space, (1, 4, 0, 3, 2, 5), f)  # c2 d2 c1 d1 c3 d3
    rest = identity((C.space * D.space) ** 2, f)
    return compose(tensor(phi.map, rest), order, tensor(d2c, d2d))


def counit_of_functional_twist(phi: Functional) -> Functional | None:
    """Counit of Δ_φ by linear solve, cross-checked against the convolution inverse."""
    eps = solve_counit(F_inv(phi).twist)
    inv = conv_inverse(phi)
    if (eps is None) != (inv is None) or (eps is not None and eps != inv):
        raise InvariantViolation("counit of Δ_φ differs from the convolution inverse of φ")
    return eps


def _require_inverse(phi: Functional) -> Functional:
    inv = conv_inverse(phi)
    if inv is None:
        raise NotInvertible(f"{phi!r} has no convolution inverse")
    return inv


def q_projections(phi: Functional) -> tuple[LinMap, LinMap]:
    """q_C(c⊗d) = ε_Ψ(c₁⊗d) c₂ and q_D(c⊗d) = ε_Ψ(c⊗d₂) d₁ with ε_Ψ = φ⁻¹."""
    eps = _require_inverse(phi).map
    C, D, f = phi.C, phi.D, phi.field
    q_c = compose(tensor(eps, C.id), permute(C.space * C.space * D.space, (0, 2, 1), f), tensor(C.delta, D.id))
    q_d = compose(tensor(eps, D.id), permute(C.space * D.space * D.space, (0, 2, 1), f), tensor(C.id, D.delta))
    return q_c, q_d


@dataclass(frozen=True)
class NuSigma:
    nu: LinMap
    sigma: LinMap
    nu_inv: LinMap
    sigma_inv: LinMap


def nu_sigma(phi: Functional) -> NuSigma:
    """ν = (p_C⊗q_D)Δ_Ψ, σ = (q_C⊗p_D)Δ_Ψ and their closed-form inverses."""
    q_c, q_d = q_projections(phi)
    tc = twisted_coalgebra(F_inv(phi).twist)
    p_c, p_d = projections(tc)
    C, D = phi.C, phi.D
    V = phi.space
    idV = identity(V, phi.field)
    nu = tensor(p_c, q_d) @ tc.delta
    sigma = tensor(q_c, p_d) @ tc.delta
    d_tensor = tensor_coproduct(C, D)
    nu_inv = tensor(idV, phi.map) @ d_tensor
    sigma_inv = tensor(phi.map, idV) @ d_tensor
    for m, mi in ((nu, nu_inv), (sigma, sigma_inv)):
        if m @ mi != idV or mi @ m != idV:
            raise InvariantViolation("closed-form inverse does not invert")
    return NuSigma(nu, sigma, nu_inv, sigma_inv)


def tilde_psi_nu(phi: Functional) -> Twist:
    """(q_D⊗p_C)Δ_Ψν⁻¹."""
    tc = twisted_coalgebra(F_inv(phi).twist)
    p_c, _ = projections(tc)
    _, q_d = q_projections(phi)
    ns = nu_sigma(phi)
    return Twist(phi.C, phi.D, compose(tensor(q_d, p_c), tc.delta, ns.nu_inv))


def tilde_psi_sigma(phi: Functional) -> Twist:
    """(p_D⊗q_C)Δ_Ψσ⁻¹."""
    tc = twisted_coalgebra(F_inv(phi).twist)
    _, p_d = projections(tc)
    q_c, _ = q_projections(phi)
    ns = nu_sigma(phi)
    return Twist(phi.C, phi.D, compose(tensor(p_d, q_c), tc.delta, ns.sigma_inv))


def _coalgebra_iso_checks(rep: Report, name: str, m: LinMap, delta_src, eps_src, delta_dst, eps_dst):
    rep.add(Check(f"{name}_invertible", invert(m) is not None))
    rep.add(compare(f"{name}_delta", tensor(m, m) @ delta_src, delta_dst @ m))
    rep.add(compare(f"{name}_counit", eps_dst @ m, eps_src))


def double_isomorphism(phi: Functional) -> Report:
    """C⊗_ΨD ≅ C⊗_Ψ̃D via μ and C⊗_ΨD ≅ C⊗D via ν and σ, all checked entrywise."""
    rep = Report("double_isomorphism")
    C, D = phi.C, phi.D
    tc = twisted_coalgebra(F_inv(phi).twist)
    eps = tc.require_counit().map
    res = conormalize(tc)
    rep.add(Check("mu_invertible", res is not None))
    if res is None:
        return rep
    tilde, mu = res
    d_tilde = tilde.delta
    eps_t = epsilon_tensor(C, D).map
    _coalgebra_iso_checks(rep, "mu", mu, tc.delta, eps, d_tilde, eps_t)
    rep.add(Check("tilde_conormal", is_conormal(tilde) == (True, True)))
    rep.add(Check("tilde_octagon", check_octagon(tilde).passed))
    ns = nu_sigma(phi)
    d_tensor = tensor_coproduct(C, D)
    _coalgebra_iso_checks(rep, "nu", ns.nu, tc.delta, eps, d_tensor, eps_t)
    _coalgebra_iso_checks(rep, "sigma", ns.sigma, tc.delta, eps, d_tensor, eps_t)
    rep.add(Check("tilde_nu_is_flip", tilde_psi_nu(phi).is_flip()))
    rep.add(Check("tilde_sigma_is_flip", tilde_psi_sigma(phi).is_flip()))
    rep.derived["tilde_is_flip"] = tilde.is_flip()
    return rep


def compose_with_tw(chi: Twist, t) -> Twist:
    """χ_Ψ = Ψ'∘χ for χ coassociative and Ψ in Tw."""
    tt = _twist(t)
    if not check_octagon(chi).passed:
        raise PreconditionFailed("χ does not satisfy the octagon identity")
    if not isinstance(t, TwTwist) and not tw_report(tt).passed:
        raise PreconditionFailed("the second twist is not in Tw")
    out = Twist(chi.C, chi.D, tt.psi_prime @ chi.psi)
    if not check_octagon(out).passed:
        raise InvariantViolation("composition with a Tw twist broke coassociativity")
    return out


# -- actions --------------------------------------------------------------------


def lambda_phi(phi: Functional) -> LinMap:
    """λ_φ(c⊗d) = d₁ φ(c⊗d₂)."""
    C, D, f = phi.C, phi.D, phi.field
    return compose(tensor(phi.map, D.id), permute(C.space * D.space * D.space, (0, 2, 1), f), tensor(C.id, D.delta))


def check_action(phi: Functional) -> Report:
    """Whether φ(c'c⊗d) = φ(c'⊗d₁)φ(c⊗d₂) and φ(1⊗d) = ε(d), and whether λ_φ is an action."""
    C, D, f = phi.C, phi.D, phi.field
    rep = Report("action")
    pm = phi.map
    swap = permute(C.space * C.space * D.space * D.space, (0, 2, 1, 3), f)
    rep.add(compare(
        "multiplicative", pm @ tensor(C.mul, D.id), compose(tensor(pm, pm), swap, tensor(C.id, C.id, D.delta))
    ))
    rep.add(compare("unital", pm @ tensor(C.unit, D.id), D.counit))
    lam = lambda_phi(phi)
    rep.add(compare("action_associative", lam @ tensor(C.id, lam), lam @ tensor(C.mul, D.id)))
    rep.add(compare("action_unital", lam @ tensor(C.unit, D.id), D.id))
    return rep


def check_twisted_module_coalgebra(phi: Functional) -> Report:
    """λ_φ is a coalgebra map from (C⊗D, Δ_{φ⁻¹}, φ) to D, and not from the untwisted structure."""
    if not check_action(phi).passed:
        raise NotAnAction(f"{phi!r} does not define an action")
    inv = _require_inverse(phi)
    C, D = phi.C, phi.D
    lam = lambda_phi(phi)
    rep = Report("twisted_module_coalgebra")
    rep.add(compare("twisted_delta", D.delta @ lam, tensor(lam, lam) @ delta_phi(inv)))
    eps_inv = counit_of_functional_twist(inv)
    rep.add(Check("twisted_counit_exists", eps_inv is not None))
    if eps_inv is not None:
        rep.add(compare("twisted_counit", D.counit @ lam, eps_inv.map))
    eps_t = epsilon_tensor(C, D)
    d1_delta = compare("untwisted_delta", D.delta @ lam, tensor(lam, lam) @ tensor_coproduct(C, D))
    d1_counit = compare("untwisted_counit", D.counit @ lam, eps_t.map)
    rep.derived["untwisted_delta_commutes"] = d1_delta.passed
    rep.derived["untwisted_counit_commutes"] = d1_counit.passed
    trivial = phi == eps_t
    rep.add(Check("untwisted_fails_iff_nontrivial", (d1_delta.passed and d1_counit.passed) == trivial))
    return rep


# -- smash coproduct ------------------------------------------------------------


def check_smash_data(H, C, action: LinMap, D, coaction: LinMap) -> Report:
    """Module-coalgebra and comodule-coalgebra axioms for the smash twist."""
    f = H.field
    rep = Report("smash_data")
    rep.add(compare("action_associative", action @ tensor(action, H.id), action @ tensor(C.id, H.mul)))
    rep.add(compare("action_unital", action @ tensor(C.id, H.unit), C.id))
    swap_c = permute(C.space * C.space * H.space * H.space, (0, 2, 1, 3), f)
    rep.add(compare(
        "module_coalgebra_delta", C.delta @ action, compose(tensor(action, action), swap_c, tensor(C.delta, H.delta))
    ))
    rep.add(compare("module_coalgebra_counit", C.counit @ action, tensor(C.counit, H.counit)))
    rep.add(compare("coaction_coassociative", tensor(coaction, H.id) @ coaction, tensor(D.id, H.delta) @ coaction))
    rep.add(compare("coaction_counital", tensor(D.id, H.counit) @ coaction, D.id))
    swap_d = permute(D.space * H.space * D.space * H.space, (0, 2, 1, 3), f)
    rep.add(compare(
        "comodule_coalgebra_delta",
        tensor(D.delta, H.id) @ coaction,
        compose(tensor(D.id, D.id, H.mul), swap_d, tensor(coaction, coaction), D.delta),
    ))
    rep.add(compare("comodule_coalgebra_counit", tensor(D.counit, H.id) @ coaction, H.unit @ D.counit))
    return rep


def smash_twist(H, C, action: LinMap, D, coaction: LinMap) -> Twist:
    """χ(c⊗d) = d₀⊗c◁d₁."""
    rep = check_smash_data(H, C, action, D, coaction)
    if not rep.passed:
        raise AxiomFailure(f"smash data fails: {[c.name for c in rep.failures()]}")
    f = H.field
    chi = compose(
        tensor(D.id, action),
        permute(C.space * D.space * H.space, (1, 0, 2), f),
        tensor(C.id, coaction),
    )
    return Twist(C, D, chi)


def check_h_invariance(phi: Functional, action: LinMap, H) -> Report:
    """φ(c◁h⊗d) = ε_H(h) φ(c⊗d)."""
    C, D, f = phi.C, phi.D, phi.field
    rep = Report("h_invariance")
    rhs = tensor(phi.map, H.counit) @ permute(C.space * H.space * D.space, (0, 2, 1), f)
    rep.add(compare("invariant", phi.map @ tensor(action, D.id), rhs))
    return rep
