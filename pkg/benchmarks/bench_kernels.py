"""Compare the numba and numpy batch kernels on the full F2 (2,2) candidate space.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once to warm the JIT cache, then the best of N timed runs is
reported.  Outputs of the two backends are compared before timing.
"""

import argparse
import time

import numpy as np

from twistco import _kernels, zoo
from twistco.equiv import _invertible_matrices
from twistco.search import grouplike_coalgebra
from twistco.linalg import Field


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads():
    f = Field(2)
    C = grouplike_coalgebra(2, f)
    dc = C.dc.astype(np.int64)
    ec = C.ec.astype(np.int64)
    psis = _kernels.decode_candidates(0, 1 << 16, 2, 16).reshape(-1, 2, 2, 2, 2)
    H = zoo.get("kC2", f).coalgebra
    T = H.dc.astype(np.int64)
    # kC2⊗kC2 as a 4-dimensional coalgebra for the automorphism filter
    d4 = np.einsum("iab,jcd->ijacbd", T, T).reshape(4, 4, 4)
    e4 = np.kron(H.ec, H.ec).astype(np.int64)
    gl4 = _invertible_matrices(2, 4)
    mats = _kernels.decode_candidates(0, 1 << 16, 2, 16).reshape(-1, 4, 4)
    return {
        "octagon_mask": lambda b: b.octagon_mask(psis, dc, dc, 2),
        "coassoc_mask": lambda b: b.coassoc_mask(psis, dc, dc, 2),
        "pentagon_masks": lambda b: b.pentagon_masks(psis, dc, dc, 2),
        "tw_masks": lambda b: b.tw_masks(psis, dc, dc, 2),
        "conormal_masks": lambda b: b.conormal_masks(psis, ec, ec, 2),
        "invertible_mask": lambda b: b.invertible_mask(mats, 2),
        "morphism_mask": lambda b: b.morphism_mask(gl4, d4, e4, d4, e4, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':16s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, run in workloads().items():
        ref, fast = run(_kernels.NUMPY), run(_kernels.NUMBA)
        if not np.array_equal(np.asarray(ref), np.asarray(fast)):
            raise SystemExit(f"{name}: backends disagree")
        t_np = best_of(lambda: run(_kernels.NUMPY), args.repeat)
        t_nb = best_of(lambda: run(_kernels.NUMBA), args.repeat)
        print(f"{name:16s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
