"""Equivalence of twists and strong isomorphism of twisted coalgebras."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _kernels
from .cotwist import Twist, solve_counit
from .errors import BudgetExceeded, InvariantViolation, ThetaInvalid
from .linalg import LinMap, flip, invert, tensor
from .report import Check, Report, compare
from .structures import is_coalgebra_morphism, tensor_coalgebra

DEFAULT_BUDGET = 1 << 16


def default_budget() -> int:
    return int(os.environ.get("TWISTCO_SEARCH_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class TwistEquivalence:
    psi1: Twist
    psi2: Twist
    theta: LinMap


def _space_map(t: Twist, theta: LinMap) -> LinMap:
    V = t.C.space * t.D.space
    if theta.shape != (V.dim, V.dim):
        raise ThetaInvalid(f"θ has shape {theta.shape}, expected {(V.dim, V.dim)}")
    return theta.relabel(V, V)


def _validate_theta(t: Twist, theta: LinMap) -> tuple[LinMap, LinMap]:
    theta = _space_map(t, theta)
    inv = invert(theta)
    if inv is None:
        raise ThetaInvalid("θ is not invertible")
    if not is_coalgebra_morphism(theta, tensor_coalgebra(t.C, t.D), tensor_coalgebra(t.C, t.D)).passed:
        raise ThetaInvalid("θ is not a coalgebra automorphism of C⊗D")
    return theta, inv


def _same_pair(t1: Twist, t2: Twist):
    if t1.C is not t2.C or t1.D is not t2.D:
        raise ThetaInvalid("twists live on different coalgebras")


def intertwining_check(t1: Twist, t2: Twist, theta: LinMap) -> Check:
    """(id_C⊗Ψ₂'⊗id_D)(θ⊗θ) = (θ⊗θ)(id_C⊗Ψ₁'⊗id_D)."""
    C, D = t1.C, t1.D
    tt = tensor(theta, theta)
    return compare(
        "intertwines_twists",
        tensor(C.id, t2.psi_prime, D.id) @ tt,
        tt @ tensor(C.id, t1.psi_prime, D.id),
    )


def _coproduct_checks(rep: Report, t1: Twist, t2: Twist, theta: LinMap) -> None:
    rep.add(compare("intertwines_coproducts", tensor(theta, theta) @ t1.delta, t2.delta @ theta))
    e1, e2 = solve_counit(t1), solve_counit(t2)
    rep.add(Check("counit_presence_agrees", (e1 is None) == (e2 is None)))
    if e1 is not None and e2 is not None:
        rep.add(compare("intertwines_counits", e2.map @ theta, e1.map))


def are_equivalent(t1: Twist, t2: Twist, theta: LinMap) -> Report:
    """Twist equivalence via θ; on success also checks θ carries Δ_Ψ₁ to Δ_Ψ₂."""
    _same_pair(t1, t2)
    theta, _ = _validate_theta(t1, theta)
    rep = Report("equivalence")
    ok = rep.add(intertwining_check(t1, t2, theta))
    if ok.passed:
        sub = Report("consequences")
        _coproduct_checks(sub, t1, t2, theta)
        if not sub.passed:
            raise InvariantViolation(f"equivalent twists with non-isomorphic coalgebras: {sub.failures()}")
        rep.extend(sub)
    return rep


def is_strongly_isomorphic(t1: Twist, t2: Twist, theta: LinMap) -> Report:
    """θ is an isomorphism of the twisted coalgebras that also intertwines the twists.

    Unlike ``are_equivalent`` this does not ask θ to respect the untwisted structure.
    """
    _same_pair(t1, t2)
    theta = _space_map(t1, theta)
    rep = Report("strong_isomorphism")
    rep.add(Check("invertible", invert(theta) is not None))
    _coproduct_checks(rep, t1, t2, theta)
    rep.derived["isomorphic_as_coalgebras"] = rep.passed
    rep.add(intertwining_check(t1, t2, theta))
    return rep


def transport_Z(Z1: LinMap, theta: LinMap, C, D) -> LinMap:
    """Z₂ = θ̂ Z₁ θ⁻¹ with θ̂ = τθτ."""
    f = C.field
    V = C.space * D.space
    theta = theta.relabel(V, V)
    inv = invert(theta)
    if inv is None:
        raise ThetaInvalid("θ is not invertible")
    hat = flip(C.space, D.space, f) @ theta @ flip(D.space, C.space, f)
    return hat @ Z1.relabel(V, D.space * C.space) @ inv


# -- automorphism search ------------------------------------------------------


@lru_cache(maxsize=8)
def _invertible_matrices(p: int, n: int) -> np.ndarray:
    """GL(n, p) as a read-only (count, n, n) array in enumeration order."""
    total = p ** (n * n)
    parts = []
    chunk = 1 << 14
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        mats = _kernels.decode_candidates(start, count, p, n * n).reshape(count, n, n)
        parts.append(mats[_kernels.invertible_mask(mats, p)])
    out = np.concatenate(parts)
    out.setflags(write=False)
    return out


def _enumerate_gl(space, field, dc1, ec1, dc2, ec2, budget: int) -> Iterator[LinMap]:
    p, n = field.p, space.dim
    total = p ** (n * n)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate matrices exceed the budget of {budget}")
    args = [None if a is None else np.asarray(a).astype(np.int64) for a in (dc1, ec1, dc2, ec2)]
    mats = _invertible_matrices(p, n)
    keep = _kernels.morphism_mask(mats, *args, p)
    for m in mats[keep]:
        yield LinMap(space, space, m, field)


def _gfp_automorphisms(coal, budget: int) -> Iterator[LinMap]:
    return _enumerate_gl(coal.space, coal.field, coal.dc, coal.ec, coal.dc, coal.ec, budget)


def _signed_permutations(coal) -> Iterator[LinMap]:
    f = coal.field
    n = coal.dim
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            m = np.zeros((n, n), dtype=object)
            for src, dst in enumerate(perm):
                m[dst, src] = signs[src]
            cand = LinMap(coal.space, coal.space, m, f)
            if is_coalgebra_morphism(cand, coal, coal).passed:
                yield cand


def coalgebra_automorphisms(coal, budget: int | None = None) -> list[LinMap]:
    """All automorphisms over GF(p) within budget; signed permutations over Q."""
    budget = default_budget() if budget is None else budget
    return list(_automorphisms(coal, budget))


@lru_cache(maxsize=64)
def _automorphisms(coal, budget: int) -> tuple[LinMap, ...]:
    if coal.field.is_rational:
        return tuple(_signed_permutations(coal))
    return tuple(_gfp_automorphisms(coal, budget))


@lru_cache(maxsize=64)
def _tensor_coalgebra(C, D):
    return tensor_coalgebra(C, D)


def _candidates(t1: Twist, search_space: str, budget: int) -> Iterator[LinMap]:
    C, D = t1.C, t1.D
    if search_space == "factorized":
        alphas = coalgebra_automorphisms(C, budget)
        betas = coalgebra_automorphisms(D, budget)
        if len(alphas) * len(betas) > budget:
            raise BudgetExceeded(f"{len(alphas) * len(betas)} factorized candidates exceed the budget")
        for a in alphas:
            for b in betas:
                yield tensor(a, b)
    elif search_space == "general":
        if t1.field.is_rational:
            raise ThetaInvalid("general θ-search is only available over a finite field")
        yield from _automorphisms(_tensor_coalgebra(C, D), budget)
    else:
        raise ValueError(f"unknown search space {search_space!r}")


def search_theta(t1: Twist, t2: Twist, search_space: str = "factorized", budget: int | None = None) -> LinMap | None:
    """A θ witnessing equivalence, or ``None`` if none was found in the search space."""
    _same_pair(t1, t2)
    budget = default_budget() if budget is None else budget
    for theta in _candidates(t1, search_space, budget):
        if intertwining_check(t1, t2, theta).passed:
            return theta
    return None


def search_strong_isomorphism(
    t1: Twist, t2: Twist, search_space: str = "factorized", budget: int | None = None
) -> LinMap | None:
    """Same search, but each candidate is judged by the strong-isomorphism definition."""
    _same_pair(t1, t2)
    budget = default_budget() if budget is None else budget
    if search_space == "general" and not t1.field.is_rational:
        V = t1.C.space * t1.D.space
        n = V.dim
        e1, e2 = solve_counit(t1), solve_counit(t2)
        if (e1 is None) != (e2 is None):
            return None
        ec1 = None if e1 is None else e1.coeffs
        ec2 = None if e2 is None else e2.coeffs
        dc1 = t1.delta.matrix.T.reshape(n, n, n)
        dc2 = t2.delta.matrix.T.reshape(n, n, n)
        cands = _enumerate_gl(V, t1.field, dc1, ec1, dc2, ec2, budget)
    else:
        cands = _candidates(t1, search_space, budget)
    for theta in cands:
        if is_strongly_isomorphic(t1, t2, theta).passed:
            return theta
    return None
