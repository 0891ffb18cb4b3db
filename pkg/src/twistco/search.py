"""Brute-force enumeration of twists over a prime field.

Candidates are all maps C⊗D → D⊗C, indexed in base p with the most significant
digit first over the entries ``psi[i, j, k, l]``.  Requested constraints are
applied as batch masks, then survivors get a classification record.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .cotwist import Twist, check_octagon, is_z_conormal, solve_counit, z_witness
from .equiv import default_budget
from .errors import BudgetExceeded, FieldMismatch, InvariantViolation
from .linalg import Field, invert
from .structures import Coalgebra

CONSTRAINTS = ("octagon", "conormal", "tw", "counit", "pentagons")
CHUNK = 1 << 13


@dataclass(frozen=True)
class SearchHit:
    index: int
    twist: Twist
    classification: dict = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "tensor": self.twist.tensor.reshape(-1).tolist(),
            **self.classification,
        }


def grouplike_coalgebra(n: int, f: Field, name: str | None = None) -> Coalgebra:
    """n group-like basis elements."""
    name = name or f"G{n}"
    return Coalgebra.from_constants(name, n, {i: {(i, i): 1} for i in range(n)}, [1] * n, f)


def candidate_count(C, D) -> int:
    n = C.dim * D.dim
    return C.field.p ** (n * n)


def _decode(indices: np.ndarray, p: int, n_entries: int) -> np.ndarray:
    idx = indices.astype(np.int64).copy()
    out = np.empty((idx.shape[0], n_entries), dtype=np.int64)
    for pos in range(n_entries - 1, -1, -1):
        out[:, pos] = idx % p
        idx //= p
    return out


def _tables(C, D) -> tuple[np.ndarray, ...]:
    return tuple(np.asarray(x).astype(np.int64) for x in (C.dc, D.dc, C.ec, D.ec))


def _masks(psis, tables, p: int, required: frozenset) -> np.ndarray:
    keep = np.ones(psis.shape[0], dtype=bool)
    dC, dD, eC, eD = tables
    if "conormal" in required:
        keep &= _kernels.conormal_masks(psis, eC, eD, p).all(axis=1)
    if "tw" in required and keep.any():
        sub = _kernels.tw_masks(psis[keep], dC, dD, p).all(axis=1)
        keep[keep] = sub
    if "pentagons" in required and keep.any():
        keep[keep] = _kernels.pentagon_masks(psis[keep], dC, dD, p).all(axis=1)
    if "octagon" in required and keep.any():
        keep[keep] = _kernels.octagon_mask(psis[keep], dC, dD, p)
    return keep


def classify(t: Twist) -> dict:
    """Classification record for one twist."""
    f = t.field
    p = f.p
    psis = t.tensor.astype(np.int64)[None]
    dC, dD = t.C.dc.astype(np.int64), t.D.dc.astype(np.int64)
    left, right = _kernels.conormal_masks(psis, t.C.ec.astype(np.int64), t.D.ec.astype(np.int64), p)[0]
    lc = _kernels.tw_masks(psis, dC, dD, p)[0]
    pent = _kernels.pentagon_masks(psis, dC, dD, p)[0]
    octagon = bool(_kernels.octagon_mask(psis, dC, dD, p)[0])
    eps = solve_counit(t)
    z_conormal = None
    if eps is not None:
        z_conormal = list(is_z_conormal(t, z_witness(eps)))
    return {
        "octagon": octagon,
        "conormal": [bool(left), bool(right)],
        "pentagons": [bool(x) for x in pent],
        "in_tw": bool(lc.all()),
        "counit": None if eps is None else [int(x) for x in eps.coeffs],
        "z_conormal": z_conormal,
        "invertible": invert(t.psi) is not None,
    }


def _shard_hits(tables, p: int, required: frozenset, shard: int, nshards: int) -> list[tuple[int, np.ndarray]]:
    """Mask survivors among candidate indices congruent to ``shard`` mod ``nshards``."""
    nC, nD = tables[0].shape[0], tables[1].shape[0]
    n_entries = (nC * nD) ** 2
    total = p ** n_entries
    out = []
    step = CHUNK * nshards
    for base in range(shard, total, step):
        idx = np.arange(base, min(total, base + step), nshards, dtype=np.int64)
        psis = _decode(idx, p, n_entries).reshape(-1, nC, nD, nD, nC)
        keep = _masks(psis, tables, p, required)
        out.extend((int(idx[i]), psis[i]) for i in np.nonzero(keep)[0])
    return out


def _worker(args):
    return _shard_hits(*args)


def search(
    C,
    D,
    require: Iterable[str] = ("octagon",),
    budget: int | None = None,
    jobs: int = 1,
    limit: int | None = None,
) -> Iterator[SearchHit]:
    """Stream twists satisfying every required constraint, in candidate-index order."""
    f = C.field
    if f.is_rational or D.field != f:
        raise FieldMismatch("search needs both coalgebras over the same prime field")
    required = frozenset(require)
    unknown = required - set(CONSTRAINTS)
    if unknown:
        raise ValueError(f"unknown constraints: {sorted(unknown)}")
    budget = default_budget() if budget is None else budget
    total = candidate_count(C, D)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget of {budget}")
    if jobs <= 1:
        yield from _stream_single(C, D, required, limit)
        return
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        tables = _tables(C, D)
        parts = list(ex.map(_worker, [(tables, f.p, required, s, jobs) for s in range(jobs)]))
    emitted = 0
    for idx, arr in heapq.merge(*parts, key=lambda h: h[0]):
        hit = _finish(C, D, idx, arr, required)
        if hit is None:
            continue
        yield hit
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def _stream_single(C, D, required: frozenset, limit: int | None) -> Iterator[SearchHit]:
    p = C.field.p
    nC, nD = C.dim, D.dim
    n_entries = (nC * nD) ** 2
    total = candidate_count(C, D)
    tables = _tables(C, D)
    emitted = 0
    for start in range(0, total, CHUNK):
        count = min(CHUNK, total - start)
        psis = _kernels.decode_candidates(start, count, p, n_entries).reshape(count, nC, nD, nD, nC)
        keep = _masks(psis, tables, p, required)
        for i in np.nonzero(keep)[0]:
            hit = _finish(C, D, start + int(i), psis[i], required)
            if hit is None:
                continue
            yield hit
            emitted += 1
            if limit is not None and emitted >= limit:
                return


def _finish(C, D, index: int, arr: np.ndarray, required: frozenset) -> SearchHit | None:
    t = Twist.from_tensor(C, D, arr)
    info = classify(t)
    if "counit" in required and info["counit"] is None:
        return None
    if "octagon" in required and not check_octagon(t, cross_check=False).passed:
        raise InvariantViolation(f"batch octagon mask accepted candidate {index} wrongly")
    return SearchHit(index, t, info)
