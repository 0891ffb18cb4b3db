"""Standard small (co)algebras used as fixtures."""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

from .errors import FieldMismatch, NotAGroup
from .linalg import K, Field, LinMap
from .structures import (
    Algebra,
    Bialgebra,
    Coalgebra,
    HopfAlgebra,
    Pairing,
)

Table = Sequence[Sequence[int]]


def cyclic_group(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def klein_four() -> list[list[int]]:
    return [[i ^ j for j in range(4)] for i in range(4)]


def symmetric_group(n: int = 3) -> list[list[int]]:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    return [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]


def validate_group(table: Table) -> tuple[int, list[int]]:
    """Return (identity index, inverse indices) or raise ``NotAGroup``."""
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise NotAGroup("multiplication table must be a non-empty square")
    if any(not (0 <= x < n) for row in table for x in row):
        raise NotAGroup("table entries must be element indices")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAGroup(f"not associative at ({a}, {b}, {c})")
    ids = [e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))]
    if not ids:
        raise NotAGroup("no identity element")
    e = ids[0]
    inv = []
    for a in range(n):
        cands = [b for b in range(n) if table[a][b] == e and table[b][a] == e]
        if not cands:
            raise NotAGroup(f"element {a} has no inverse")
        inv.append(cands[0])
    return e, inv


def group_algebra(table: Table, field: Field, name: str = "kG") -> HopfAlgebra:
    e, inv = validate_group(table)
    n = len(table)
    coal = Coalgebra.from_constants(name, n, {g: {(g, g): 1} for g in range(n)}, [1] * n, field)
    alg = Algebra.from_constants(
        name, n, {(a, b): {table[a][b]: 1} for a in range(n) for b in range(n)},
        [1 if g == e else 0 for g in range(n)], field,
    )
    S = LinMap.from_function(coal.space, coal.space, lambda g: {(inv[g[0]],): 1}, field)
    return HopfAlgebra(name, coal, alg, S)


def function_algebra(table: Table, field: Field, name: str = "k^G") -> HopfAlgebra:
    e, inv = validate_group(table)
    n = len(table)
    delta: dict[int, dict] = {x: {} for x in range(n)}
    for y, z in itertools.product(range(n), repeat=2):
        delta[table[y][z]][(y, z)] = 1
    coal = Coalgebra.from_constants(name, n, delta, [1 if x == e else 0 for x in range(n)], field)
    alg = Algebra.from_constants(name, n, {(x, x): {x: 1} for x in range(n)}, [1] * n, field)
    S = LinMap.from_function(coal.space, coal.space, lambda x: {(inv[x[0]],): 1}, field)
    return HopfAlgebra(name, coal, alg, S)


def sweedler_h4(field: Field, name: str = "H4") -> HopfAlgebra:
    """Basis 1, g, x, gx with g² = 1, x² = 0, xg = -gx."""
    if field.p == 2:
        raise FieldMismatch("the four-dimensional Sweedler algebra needs characteristic other than 2")

    def idx(a, b):
        return 2 * b + a  # g^a x^b -> 0:1, 1:g, 2:x, 3:gx

    mul = {}
    for a, b, c, d in itertools.product(range(2), repeat=4):
        if b + d >= 2:
            continue
        sign = -1 if (b * c) % 2 else 1
        mul[(idx(a, b), idx(c, d))] = {idx((a + c) % 2, b + d): sign}
    delta = {
        0: {(0, 0): 1},
        1: {(1, 1): 1},
        2: {(2, 0): 1, (1, 2): 1},
        3: {(3, 1): 1, (0, 3): 1},
    }
    coal = Coalgebra.from_constants(name, 4, delta, [1, 1, 0, 0], field)
    alg = Algebra.from_constants(name, 4, mul, [1, 0, 0, 0], field)
    S = LinMap.from_function(
        coal.space, coal.space,
        lambda i: {0: {(0,): 1}, 1: {(1,): 1}, 2: {(3,): -1}, 3: {(2,): 1}}[i[0]],
        field,
    )
    return HopfAlgebra(name, coal, alg, S)


def matrix_coalgebra(n: int, field: Field, name: str | None = None) -> Coalgebra:
    """Comatrix coalgebra: Δ(e_ij) = Σ_k e_ik⊗e_kj, ε(e_ij) = δ_ij."""
    name = name or f"Mc{n}"
    delta = {
        i * n + j: {(i * n + k, k * n + j): 1 for k in range(n)}
        for i in range(n) for j in range(n)
    }
    counit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return Coalgebra.from_constants(name, n * n, delta, counit, field)


def matrix_algebra(n: int, field: Field, name: str | None = None) -> Algebra:
    name = name or f"M{n}"
    mul = {}
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if j == k:
            mul[(i * n + j, k * n + l)] = {i * n + l: 1}
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    return Algebra.from_constants(name, n * n, mul, unit, field)


def ground_coalgebra(field: Field, name: str = "k") -> Coalgebra:
    return Coalgebra.from_constants(name, 1, {0: {(0, 0): 1}}, [1], field)


def ground_algebra(field: Field, name: str = "k") -> Algebra:
    return Algebra.from_constants(name, 1, {(0, 0): {0: 1}}, [1], field)


def group_dual_pairing(table: Table, field: Field, names=("kG", "k^G")) -> Pairing:
    """(kG, k^G, ⟨g, δ_x⟩ = δ_{g,x})."""
    C = group_algebra(table, field, names[0])
    D = function_algebra(table, field, names[1])
    form = LinMap.from_function(C.space * D.space, K, lambda gx: {(): 1} if gx[0] == gx[1] else {}, field)
    return Pairing(C, D, form)


def smash_fixture(n: int, field: Field):
    """H = kC_n acting on C = kC_n by right multiplication; D = k^{C_n} with ρ(δ_x) = δ_x⊗x.

    Returns ``(H, C, action, D, coaction)``.
    """
    table = cyclic_group(n)
    H = group_algebra(table, field, f"kC{n}")
    C = group_algebra(table, field, f"kC{n}'")
    D = function_algebra(table, field, f"k^C{n}")
    action = LinMap.from_function(C.space * H.space, C.space, lambda ch: {(table[ch[0]][ch[1]],): 1}, field)
    coaction = LinMap.from_function(D.space, D.space * H.space, lambda x: {(x[0], x[0]): 1}, field)
    return H, C, action, D, coaction


_GROUPS: dict[str, Callable[[], list[list[int]]]] = {
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
    "C4": lambda: cyclic_group(4),
    "V4": klein_four,
    "S3": lambda: symmetric_group(3),
}


def _catalog() -> dict[str, tuple[str, Callable[[Field], object]]]:
    cat: dict[str, tuple[str, Callable[[Field], object]]] = {}
    for g, tbl in _GROUPS.items():
        cat[f"k{g}"] = (f"group Hopf algebra of {g}", lambda f, t=tbl, g=g: group_algebra(t(), f, f"k{g}"))
        cat[f"k^{g}"] = (f"function Hopf algebra on {g}", lambda f, t=tbl, g=g: function_algebra(t(), f, f"k^{g}"))
    cat["H4"] = ("Sweedler four-dimensional Hopf algebra", lambda f: sweedler_h4(f))
    for n in (2, 3):
        cat[f"Mc{n}"] = (f"{n}x{n} comatrix coalgebra", lambda f, n=n: matrix_coalgebra(n, f))
        cat[f"M{n}"] = (f"{n}x{n} matrix algebra", lambda f, n=n: matrix_algebra(n, f))
    cat["k"] = ("ground field as a bialgebra", lambda f: Bialgebra("k", ground_coalgebra(f), ground_algebra(f)))
    return cat


CATALOG = _catalog()


def list_zoo() -> list[tuple[str, str]]:
    return [(name, desc) for name, (desc, _) in sorted(CATALOG.items())]


def get(name: str, field: Field):
    if name not in CATALOG:
        raise KeyError(f"unknown zoo object {name!r}")
    return CATALOG[name][1](field)
