#!/usr/bin/env python3
"""Timing comparison of the numba kernels against the pure-numpy fallback.

Run from the repo root:

    python3 benchmarks/bench_backends.py [--repeats 5]

The pair-propagator kernel is the package hot spot (thousands of banded
matrix-vector products per evolution); the dense Taylor kernel is BLAS-bound
in both backends, so near-parity there is the expected outcome, not a bug.
"""

import argparse
import math
import time

import numpy as np
from scipy.special import jv

from pacslab import backend
from pacslab import downconversion as dc
from pacslab.fock import coherent_state


def cheb_inputs(alpha, r, phi=0.0):
    da, db = dc.auto_dims(alpha, r)
    psi = np.zeros((da, db), dtype=np.complex128)
    psi[:, 0] = coherent_state(alpha, da).amp
    bound = 2.0 * r * math.sqrt(da * db)
    ks = np.arange(int(bound + 40 + 15 * bound ** (1 / 3)) + 1)
    bes = jv(ks, bound)
    keep = np.nonzero(np.abs(bes) > 5e-17)[0]
    coeff = ((-1j) ** ks[: keep[-1] + 1]) * bes[: keep[-1] + 1]
    coeff[1:] *= 2.0
    w = backend.pair_weights(da, db)
    cu = r * np.exp(1j * phi) / bound
    cd = r * np.exp(-1j * phi) / bound
    return (da, db, len(coeff)), (psi, w, cu, cd, coeff)


def compare(numpy_fn, numba_fn, repeats):
    """Interleaved best-of-N timing; min damps scheduler and throttling noise."""
    t_np, t_nb = [], []
    for _ in range(repeats):
        t0 = time.perf_counter()
        numpy_fn()
        t_np.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        numba_fn()
        t_nb.append(time.perf_counter() - t0)
    return min(t_np), min(t_nb)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if not backend.USE_NUMBA:
        print("numba backend unavailable (PACSLAB_BACKEND=numpy?); nothing to compare")
        return

    print(f"active backend: {backend.backend_name()}, repeats: {args.repeats}")
    print()
    print("pair-propagator Chebyshev evolution")
    print(f"{'case':<24}{'grid':>12}{'terms':>8}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for alpha, r in ((0.8, 0.5), (0.8, 1.0), (0.8, 2.0), (1.5, 2.0)):
        (da, db, nterms), inputs = cheb_inputs(alpha, r)
        # warm the JIT before timing
        backend.cheb_pair_evolve(*inputs)
        t_np, t_nb = compare(
            lambda: backend.cheb_pair_evolve(*inputs, force_numpy=True),
            lambda: backend.cheb_pair_evolve(*inputs),
            args.repeats,
        )
        print(
            f"alpha={alpha}, r={r:<13}{f'{da}x{db}':>12}{nterms:>8}"
            f"{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x"
        )

    print()
    print("dense matrix-exponential action (segmented Taylor, BLAS-backed)")
    print(f"{'dim':<24}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    rng = np.random.default_rng(0)
    for dim in (256, 768):
        h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = (h + h.conj().T) / (2 * math.sqrt(dim))
        m = -1j * h
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        segs = backend.taylor_segments(float(np.max(np.sum(np.abs(m), axis=0))))
        backend.expm_taylor(m, v, segs, 1e-13, 160)
        t_np, t_nb = compare(
            lambda: backend.expm_taylor(m, v, segs, 1e-13, 160, force_numpy=True),
            lambda: backend.expm_taylor(m, v, segs, 1e-13, 160),
            args.repeats,
        )
        print(f"{dim:<24}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
