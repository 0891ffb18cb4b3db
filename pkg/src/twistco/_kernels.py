"""Hot numeric kernels over prime fields.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy version
with identical semantics.  The active set is chosen once at import time:
numba is used when it imports cleanly, unless ``TWISTCO_NUMBA=0`` is set in the
environment.  Both sets stay reachable as ``NUMBA`` and ``NUMPY`` so tests and
the benchmark can compare them directly.

Structure-constant conventions used by the batch twist predicates (all arrays
are int64 with entries reduced mod ``p``):

* ``dC[i, j, k]``: coefficient of ``c_j (x) c_k`` in ``Delta_C(c_i)``
* ``eC[i]``: ``eps_C(c_i)``
* ``psis[z, i, j, k, l]``: coefficient of ``d_k (x) c_l`` in ``Psi_z(c_i (x) d_j)``

Batch inputs must satisfy ``p < 2**24`` so that single products fit in 48 bits
and short contractions cannot overflow int64.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

MAX_BATCH_PRIME = 1 << 24

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def _env_wants_numba() -> bool:
    flag = os.environ.get("TWISTCO_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _np_matmul_mod(a, b, p):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[1] if a.ndim == 2 else 0
    if p <= (1 << 20) and inner < (1 << 20):
        return (a @ b) % p
    out = (a.astype(object) @ b.astype(object)) % p
    return out.astype(np.int64)


def _np_rref_mod(a, p):
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = int(m[i, c])
                m[i] = (m[i] - f * m[r]) % p
        pivots.append(c)
        r += 1
    return m, np.array(pivots, dtype=np.int64)


def _inv_mod_vec(x, p):
    """Elementwise inverse mod prime p by Fermat exponentiation."""
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _np_invertible_mask(mats, p):
    m = np.array(mats, dtype=np.int64) % p
    nb, n, _ = m.shape
    row = np.zeros(nb, dtype=np.int64)
    ar = np.arange(n)
    for col in range(n):
        cand = (m[:, :, col] != 0) & (ar[None, :] >= row[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        r = row[b]
        tmp = m[b, r].copy()
        m[b, r] = m[b, piv]
        m[b, piv] = tmp
        inv = _inv_mod_vec(m[b, r, col], p)
        prow = (m[b, r] * inv[:, None]) % p
        m[b, r] = prow
        factor = m[b, :, col].copy()
        factor[np.arange(b.size), r] = 0
        m[b] = (m[b] - factor[:, :, None] * prow[:, None, :]) % p
        row[b] += 1
    return row == n


def _flat_eq(lhs, rhs):
    nb = lhs.shape[0]
    return np.all(lhs.reshape(nb, -1) == rhs.reshape(nb, -1), axis=1)


def _np_octagon_mask(psis, dC, dD, p):
    t = np.einsum("jab,ziakl->zijbkl", dD, psis) % p
    t = np.einsum("zijbkl,lmn->zijbkmn", t, dC) % p
    lhs = np.einsum("zijbkmn,znbqr->zijkmqr", t, psis) % p
    r = np.einsum("iab,zbjst->ziajst", dC, psis) % p
    r = np.einsum("ziajst,suv->ziajuvt", r, dD) % p
    rhs = np.einsum("ziajuvt,zaukm->zijkmvt", r, psis) % p
    return _flat_eq(lhs, rhs)


def _np_twisted_delta(psis, dC, dD, p):
    # Delta_Psi[z, i, j, a, k, l, b]
    t = np.einsum("iax,zxykl->ziaykl", dC, psis) % p
    t = np.einsum("ziaykl,jyb->zijaklb", t, dD) % p
    nb = psis.shape[0]
    nC, nD = dC.shape[0], dD.shape[0]
    n = nC * nD
    return t.reshape(nb, n, n, n)


def _np_coassoc_mask(psis, dC, dD, p):
    d = _np_twisted_delta(psis, dC, dD, p)
    lhs = np.einsum("zusx,zsvw->zuvwx", d, d) % p
    rhs = np.einsum("zuvs,zswx->zuvwx", d, d) % p
    return _flat_eq(lhs, rhs)


def _np_pentagon_masks(psis, dC, dD, p):
    t = np.einsum("jab,ziakl->zijbkl", dD, psis) % p
    lhs1 = np.einsum("zijbkl,zlbqr->zijkqr", t, psis) % p
    rhs1 = np.einsum("zijsr,skq->zijkqr", psis, dD) % p
    u = np.einsum("iab,zbjst->ziajst", dC, psis) % p
    lhs2 = np.einsum("ziajst,zaskm->zijkmt", u, psis) % p
    rhs2 = np.einsum("zijkl,lmt->zijkmt", psis, dC) % p
    return np.stack([_flat_eq(lhs1, rhs1), _flat_eq(lhs2, rhs2)], axis=1)


def _np_conormal_masks(psis, eC, eD, p):
    nC, nD = eC.shape[0], eD.shape[0]
    right_l = np.einsum("zijkl,k->zijl", psis, eD) % p
    right_r = np.einsum("il,j->ijl", np.eye(nC, dtype=np.int64), eD) % p
    left_l = np.einsum("zijkl,l->zijk", psis, eC) % p
    left_r = np.einsum("i,jk->ijk", eC, np.eye(nD, dtype=np.int64)) % p
    left = _flat_eq(left_l, np.broadcast_to(left_r, left_l.shape))
    right = _flat_eq(right_l, np.broadcast_to(right_r, right_l.shape))
    return np.stack([left, right], axis=1)


def _np_tw_masks(psis, dC, dD, p):
    lhs1 = np.einsum("zijkl,kab->zjiabl", psis, dD) % p
    rhs1 = np.einsum("jas,zisbl->zjiabl", dD, psis) % p
    lhs2 = np.einsum("zijkl,lmn->zjikmn", psis, dC) % p
    rhs2 = np.einsum("isn,zsjkm->zjikmn", dC, psis) % p
    return np.stack([_flat_eq(lhs1, rhs1), _flat_eq(lhs2, rhs2)], axis=1)


def _np_morphism_mask(mats, dc1, ec1, dc2, ec2, p):
    """Which ``mats[z]`` (out, in) carry (dc1, ec1) to (dc2, ec2); empty counits are skipped."""
    ok = np.ones(mats.shape[0], dtype=np.bool_)
    if ec1.shape[0]:
        co = np.tensordot(mats, ec2, axes=([1], [0])) % p
        ok = np.all(co == ec1[None, :], axis=1)
    idx = np.nonzero(ok)[0]
    sub = mats[idx]
    lhs = np.tensordot(sub, dc2, axes=([1], [0])) % p
    t = np.matmul(sub[:, None], dc1[None]) % p
    rhs = np.matmul(t, sub.transpose(0, 2, 1)[:, None]) % p
    ok[idx] = _flat_eq(lhs, rhs)
    return ok


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_matmul_mod(a, b, p):
    n, m = a.shape
    k = b.shape[1]
    out = np.zeros((n, k), dtype=np.int64)
    for i in range(n):
        for t in range(m):
            x = a[i, t]
            if x == 0:
                continue
            for j in range(k):
                y = b[t, j]
                if y != 0:
                    out[i, j] = (out[i, j] + (x * y) % p) % p
    return out


@njit(cache=True)
def _nb_inv_mod(x, p):
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True)
def _nb_rref_inplace(m, p):
    rows, cols = m.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = tmp
        inv = _nb_inv_mod(m[r, c], p)
        for j in range(cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(cols):
                    m[i, j] = (m[i, j] - (f * m[r, j]) % p + p) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


def _nb_rref_mod(a, p):
    m = np.array(a, dtype=np.int64) % p
    piv = _nb_rref_inplace(m, p)
    return m, piv


@njit(cache=True)
def _nb_invertible_mask(mats, p):
    nb, n, _ = mats.shape
    out = np.zeros(nb, dtype=np.bool_)
    for z in range(nb):
        m = mats[z].copy()
        piv = _nb_rref_inplace(m, p)
        out[z] = piv.shape[0] == n
    return out


@njit(cache=True)
def _nb_octagon_one(psi, dC, dD, p):
    nC = dC.shape[0]
    nD = dD.shape[0]
    for i in range(nC):
        for j in range(nD):
            lhs = np.zeros((nD, nC, nD, nC), dtype=np.int64)
            rhs = np.zeros((nD, nC, nD, nC), dtype=np.int64)
            # lhs: (id_D id_C Psi)(id_D Delta_C id_D)(Psi id_D)(id_C Delta_D)
            for a in range(nD):
                for b in range(nD):
                    w1 = dD[j, a, b]
                    if w1 == 0:
                        continue
                    for k in range(nD):
                        for l in range(nC):
                            w2 = (w1 * psi[i, a, k, l]) % p
                            if w2 == 0:
                                continue
                            for m in range(nC):
                                for n in range(nC):
                                    w3 = (w2 * dC[l, m, n]) % p
                                    if w3 == 0:
                                        continue
                                    for q in range(nD):
                                        for r in range(nC):
                                            w4 = (w3 * psi[n, b, q, r]) % p
                                            if w4 != 0:
                                                lhs[k, m, q, r] = (lhs[k, m, q, r] + w4) % p
            # rhs: (Psi id_D id_C)(id_C Delta_D id_C)(id_C Psi)(Delta_C id_D)
            for a in range(nC):
                for b in range(nC):
                    w1 = dC[i, a, b]
                    if w1 == 0:
                        continue
                    for s in range(nD):
                        for t in range(nC):
                            w2 = (w1 * psi[b, j, s, t]) % p
                            if w2 == 0:
                                continue
                            for u in range(nD):
                                for v in range(nD):
                                    w3 = (w2 * dD[s, u, v]) % p
                                    if w3 == 0:
                                        continue
                                    for k in range(nD):
                                        for m in range(nC):
                                            w4 = (w3 * psi[a, u, k, m]) % p
                                            if w4 != 0:
                                                rhs[k, m, v, t] = (rhs[k, m, v, t] + w4) % p
            for x0 in range(nD):
                for x1 in range(nC):
                    for x2 in range(nD):
                        for x3 in range(nC):
                            if lhs[x0, x1, x2, x3] != rhs[x0, x1, x2, x3]:
                                return False
    return True


@njit(cache=True)
def _nb_octagon_mask(psis, dC, dD, p):
    nb = psis.shape[0]
    out = np.zeros(nb, dtype=np.bool_)
    for z in range(nb):
        out[z] = _nb_octagon_one(psis[z], dC, dD, p)
    return out


@njit(cache=True)
def _nb_coassoc_mask(psis, dC, dD, p):
    nb = psis.shape[0]
    nC = dC.shape[0]
    nD = dD.shape[0]
    n = nC * nD
    out = np.zeros(nb, dtype=np.bool_)
    for z in range(nb):
        psi = psis[z]
        d = np.zeros((n, n, n), dtype=np.int64)
        for i in range(nC):
            for j in range(nD):
                u = i * nD + j
                for a in range(nC):
                    for x in range(nC):
                        w1 = dC[i, a, x]
                        if w1 == 0:
                            continue
                        for y in range(nD):
                            for b in range(nD):
                                w2 = (w1 * dD[j, y, b]) % p
                                if w2 == 0:
                                    continue
                                for k in range(nD):
                                    for l in range(nC):
                                        w3 = (w2 * psi[x, y, k, l]) % p
                                        if w3 != 0:
                                            v = a * nD + k
                                            w = l * nD + b
                                            d[u, v, w] = (d[u, v, w] + w3) % p
        ok = True
        for u in range(n):
            if not ok:
                break
            for v in range(n):
                if not ok:
                    break
                for w in range(n):
                    if not ok:
                        break
                    for x in range(n):
                        lhs = 0
                        rhs = 0
                        for s in range(n):
                            lhs = (lhs + (d[u, s, x] * d[s, v, w]) % p) % p
                            rhs = (rhs + (d[u, v, s] * d[s, w, x]) % p) % p
                        if lhs != rhs:
                            ok = False
                            break
        out[z] = ok
    return out


@njit(cache=True)
def _nb_pentagon_masks(psis, dC, dD, p):
    nb = psis.shape[0]
    nC = dC.shape[0]
    nD = dD.shape[0]
    out = np.zeros((nb, 2), dtype=np.bool_)
    for z in range(nb):
        psi = psis[z]
        ok1 = True
        ok2 = True
        for i in range(nC):
            for j in range(nD):
                l1 = np.zeros((nD, nD, nC), dtype=np.int64)
                r1 = np.zeros((nD, nD, nC), dtype=np.int64)
                for a in range(nD):
                    for b in range(nD):
                        w1 = dD[j, a, b]
                        if w1 == 0:
                            continue
                        for k in range(nD):
                            for l in range(nC):
                                w2 = (w1 * psi[i, a, k, l]) % p
                                if w2 == 0:
                                    continue
                                for q in range(nD):
                                    for r in range(nC):
                                        l1[k, q, r] = (l1[k, q, r] + (w2 * psi[l, b, q, r]) % p) % p
                for s in range(nD):
                    for r in range(nC):
                        w1 = psi[i, j, s, r]
                        if w1 == 0:
                            continue
                        for k in range(nD):
                            for q in range(nD):
                                r1[k, q, r] = (r1[k, q, r] + (w1 * dD[s, k, q]) % p) % p
                for x0 in range(nD):
                    for x1 in range(nD):
                        for x2 in range(nC):
                            if l1[x0, x1, x2] != r1[x0, x1, x2]:
                                ok1 = False
                l2 = np.zeros((nD, nC, nC), dtype=np.int64)
                r2 = np.zeros((nD, nC, nC), dtype=np.int64)
                for a in range(nC):
                    for b in range(nC):
                        w1 = dC[i, a, b]
                        if w1 == 0:
                            continue
                        for s in range(nD):
                            for t in range(nC):
                                w2 = (w1 * psi[b, j, s, t]) % p
                                if w2 == 0:
                                    continue
                                for k in range(nD):
                                    for m in range(nC):
                                        l2[k, m, t] = (l2[k, m, t] + (w2 * psi[a, s, k, m]) % p) % p
                for k in range(nD):
                    for l in range(nC):
                        w1 = psi[i, j, k, l]
                        if w1 == 0:
                            continue
                        for m in range(nC):
                            for t in range(nC):
                                r2[k, m, t] = (r2[k, m, t] + (w1 * dC[l, m, t]) % p) % p
                for x0 in range(nD):
                    for x1 in range(nC):
                        for x2 in range(nC):
                            if l2[x0, x1, x2] != r2[x0, x1, x2]:
                                ok2 = False
        out[z, 0] = ok1
        out[z, 1] = ok2
    return out


@njit(cache=True)
def _nb_conormal_masks(psis, eC, eD, p):
    nb = psis.shape[0]
    nC = eC.shape[0]
    nD = eD.shape[0]
    out = np.zeros((nb, 2), dtype=np.bool_)
    for z in range(nb):
        left = True
        right = True
        for i in range(nC):
            for j in range(nD):
                # right: (eps_D (x) id_C) Psi = id_C (x) eps_D
                for l in range(nC):
                    acc = 0
                    for k in range(nD):
                        acc = (acc + (psis[z, i, j, k, l] * eD[k]) % p) % p
                    target = eD[j] % p if l == i else 0
                    if acc != target:
                        right = False
                # left: (id_D (x) eps_C) Psi = eps_C (x) id_D
                for k in range(nD):
                    acc = 0
                    for l in range(nC):
                        acc = (acc + (psis[z, i, j, k, l] * eC[l]) % p) % p
                    target = eC[i] % p if k == j else 0
                    if acc != target:
                        left = False
        out[z, 0] = left
        out[z, 1] = right
    return out


@njit(cache=True)
def _nb_tw_masks(psis, dC, dD, p):
    nb = psis.shape[0]
    nC = dC.shape[0]
    nD = dD.shape[0]
    out = np.zeros((nb, 2), dtype=np.bool_)
    for z in range(nb):
        ok1 = True
        ok2 = True
        for i in range(nC):
            for j in range(nD):
                for a in range(nD):
                    for b in range(nD):
                        for l in range(nC):
                            lhs = 0
                            for k in range(nD):
                                lhs = (lhs + (psis[z, i, j, k, l] * dD[k, a, b]) % p) % p
                            rhs = 0
                            for s in range(nD):
                                rhs = (rhs + (dD[j, a, s] * psis[z, i, s, b, l]) % p) % p
                            if lhs != rhs:
                                ok1 = False
                for k in range(nD):
                    for m in range(nC):
                        for n in range(nC):
                            lhs = 0
                            for l in range(nC):
                                lhs = (lhs + (psis[z, i, j, k, l] * dC[l, m, n]) % p) % p
                            rhs = 0
                            for s in range(nC):
                                rhs = (rhs + (dC[i, s, n] * psis[z, s, j, k, m]) % p) % p
                            if lhs != rhs:
                                ok2 = False
        out[z, 0] = ok1
        out[z, 1] = ok2
    return out


@njit(cache=True)
def _nb_morphism_mask(mats, dc1, ec1, dc2, ec2, p):
    nb = mats.shape[0]
    n = mats.shape[1]
    out = np.zeros(nb, dtype=np.bool_)
    for z in range(nb):
        ok = True
        for a in range(ec1.shape[0]):
            s = 0
            for i in range(n):
                s = (s + mats[z, i, a] * ec2[i]) % p
            if s != ec1[a]:
                ok = False
                break
        a = 0
        while ok and a < n:
            for j in range(n):
                for k in range(n):
                    lhs = 0
                    for i in range(n):
                        lhs = (lhs + mats[z, i, a] * dc2[i, j, k]) % p
                    rhs = 0
                    for b in range(n):
                        if mats[z, j, b] == 0:
                            continue
                        for c in range(n):
                            rhs = (rhs + (dc1[a, b, c] * mats[z, j, b]) % p * mats[z, k, c]) % p
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            a += 1
        out[z] = ok
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def decode_candidates(start, count, p, n_entries):
    """Digits (most significant first) of candidate indices ``start .. start+count-1``."""
    idx = np.arange(start, start + count, dtype=np.int64)
    digits = np.empty((count, n_entries), dtype=np.int64)
    for pos in range(n_entries - 1, -1, -1):
        digits[:, pos] = idx % p
        idx //= p
    return digits


NUMPY = SimpleNamespace(
    name="numpy",
    matmul_mod=_np_matmul_mod,
    rref_mod=_np_rref_mod,
    invertible_mask=_np_invertible_mask,
    octagon_mask=_np_octagon_mask,
    coassoc_mask=_np_coassoc_mask,
    pentagon_masks=_np_pentagon_masks,
    conormal_masks=_np_conormal_masks,
    tw_masks=_np_tw_masks,
    morphism_mask=_np_morphism_mask,
)

NUMBA = SimpleNamespace(
    name="numba",
    matmul_mod=lambda a, b, p: _nb_matmul_mod(
        np.ascontiguousarray(a, dtype=np.int64), np.ascontiguousarray(b, dtype=np.int64), p
    ),
    rref_mod=_nb_rref_mod,
    invertible_mask=lambda mats, p: _nb_invertible_mask(np.ascontiguousarray(mats, dtype=np.int64) % p, p),
    octagon_mask=_nb_octagon_mask,
    coassoc_mask=_nb_coassoc_mask,
    pentagon_masks=_nb_pentagon_masks,
    conormal_masks=_nb_conormal_masks,
    tw_masks=_nb_tw_masks,
    morphism_mask=_nb_morphism_mask,
) if HAVE_NUMBA else None


def active():
    """The kernel namespace currently in use."""
    return _ACTIVE


def use(name: str) -> None:
    """Switch backends at runtime (``"numba"`` or ``"numpy"``)."""
    global _ACTIVE
    if name == "numba":
        if NUMBA is None:
            raise RuntimeError("numba is not installed")
        _ACTIVE = NUMBA
    elif name == "numpy":
        _ACTIVE = NUMPY
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


_ACTIVE = NUMBA if (HAVE_NUMBA and _env_wants_numba()) else NUMPY


def matmul_mod(a, b, p):
    if _ACTIVE is NUMBA and p >= (1 << 31):
        return NUMPY.matmul_mod(a, b, p)
    return _ACTIVE.matmul_mod(a, b, p)


def rref_mod(a, p):
    return _ACTIVE.rref_mod(a, p)


def _batch_args(psis, *tables):
    return (np.ascontiguousarray(psis, dtype=np.int64),) + tuple(
        np.ascontiguousarray(t, dtype=np.int64) for t in tables
    )


def _check_prime(p):
    if p >= MAX_BATCH_PRIME:
        raise ValueError(f"batch kernels require p < 2**24, got {p}")


def octagon_mask(psis, dC, dD, p):
    _check_prime(p)
    return _ACTIVE.octagon_mask(*_batch_args(psis, dC, dD), p)


def coassoc_mask(psis, dC, dD, p):
    _check_prime(p)
    return _ACTIVE.coassoc_mask(*_batch_args(psis, dC, dD), p)


def pentagon_masks(psis, dC, dD, p):
    _check_prime(p)
    return _ACTIVE.pentagon_masks(*_batch_args(psis, dC, dD), p)


def conormal_masks(psis, eC, eD, p):
    _check_prime(p)
    return _ACTIVE.conormal_masks(*_batch_args(psis, eC, eD), p)


def tw_masks(psis, dC, dD, p):
    _check_prime(p)
    return _ACTIVE.tw_masks(*_batch_args(psis, dC, dD), p)


def invertible_mask(mats, p):
    _check_prime(p)
    return _ACTIVE.invertible_mask(np.asarray(mats, dtype=np.int64), p)


def morphism_mask(mats, dc1, ec1, dc2, ec2, p):
    """Batch test of (θ⊗θ)Δ₁ = Δ₂θ and ε₂θ = ε₁; pass ``None`` counits to skip that test."""
    _check_prime(p)
    empty = np.zeros(0, dtype=np.int64)
    e1 = empty if ec1 is None else ec1
    e2 = empty if ec2 is None else ec2
    mats, dc1, e1, dc2, e2 = _batch_args(mats, dc1, e1, dc2, e2)
    return _ACTIVE.morphism_mask(mats, dc1, e1, dc2, e2, p)
