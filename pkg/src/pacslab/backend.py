"""Numerical kernels with a numba fast path and a pure-numpy fallback.

The backend is selected once at import time from the environment variable
``PACSLAB_BACKEND``:

* ``auto`` (default): use numba if it imports, else numpy,
* ``numba``: require numba, fail loudly if it is missing,
* ``numpy``: force the pure-numpy path.

Both paths run the same algorithm with the same operation order; results
agree to floating-point roundoff (LLVM may contract complex multiply-adds,
so bit-for-bit equality across backends is not promised, only within one
backend).  ``benchmarks/bench_backends.py`` compares their speed.
"""

import math
import os

import numpy as np

_CHOICE = os.environ.get("PACSLAB_BACKEND", "auto").strip().lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"PACSLAB_BACKEND must be one of auto/numba/numpy, got {_CHOICE!r}"
    )

_HAVE_NUMBA = False
if _CHOICE in ("auto", "numba"):
    try:
        import numba as _nb

        _HAVE_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise
        _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and _CHOICE in ("auto", "numba")


def backend_name() -> str:
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Chebyshev propagation of the two-mode pair-coupling generator.
#
# Evolves psi under exp(-i H) with H = g (e^{i phi} a+ b+ + e^{-i phi} a b),
# Hermitian with spectrum inside [-bound, bound].  The expansion
#   exp(-i H) = sum_k c_k T_k(H / bound),   c_k = (2 - delta_k0)(-i)^k J_k(bound)
# is evaluated with the three-term Chebyshev recurrence; one matrix-vector
# product per term, each O(dim_a * dim_b) thanks to the two-band structure
#   (H x)[j, n] = g e^{i phi} sqrt(j n) x[j-1, n-1]
#              + g e^{-i phi} sqrt((j+1)(n+1)) x[j+1, n+1].
# ---------------------------------------------------------------------------


def _cheb_pair_evolve_numpy(psi, w, cu, cd, coeff):
    def apply_scaled(x, out):
        out[:] = 0
        out[1:, 1:] += cu * w * x[:-1, :-1]
        out[:-1, :-1] += cd * w * x[1:, 1:]
        return out

    tm1 = psi.copy()
    t = np.empty_like(psi)
    apply_scaled(tm1, t)
    y = coeff[0] * tm1 + coeff[1] * t
    tmp = np.empty_like(psi)
    for k in range(2, len(coeff)):
        apply_scaled(t, tmp)
        tmp *= 2.0
        tmp -= tm1
        tm1, t, tmp = t, tmp, tm1
        y += coeff[k] * t
    return y


if USE_NUMBA:

    @_nb.njit(cache=True)
    def _cheb_pair_evolve_numba(psi, w, cu, cd, coeff):  # pragma: no cover
        da, db = psi.shape
        tm1 = psi.copy()
        t = np.zeros_like(psi)
        for j in range(da):
            for n in range(db):
                acc = 0.0 + 0.0j
                if j > 0 and n > 0:
                    acc += cu * w[j - 1, n - 1] * tm1[j - 1, n - 1]
                if j + 1 < da and n + 1 < db:
                    acc += cd * w[j, n] * tm1[j + 1, n + 1]
                t[j, n] = acc
        y = coeff[0] * tm1 + coeff[1] * t
        tmp = np.zeros_like(psi)
        for k in range(2, len(coeff)):
            for j in range(da):
                for n in range(db):
                    acc = 0.0 + 0.0j
                    if j > 0 and n > 0:
                        acc += cu * w[j - 1, n - 1] * t[j - 1, n - 1]
                    if j + 1 < da and n + 1 < db:
                        acc += cd * w[j, n] * t[j + 1, n + 1]
                    tmp[j, n] = 2.0 * acc - tm1[j, n]
            for j in range(da):
                for n in range(db):
                    tm1[j, n] = t[j, n]
                    t[j, n] = tmp[j, n]
                    y[j, n] += coeff[k] * t[j, n]
        return y


def cheb_pair_evolve(psi, w, cu, cd, coeff, force_numpy=False):
    """Apply the Chebyshev-expanded pair-coupling propagator to ``psi``.

    psi: complex (dim_a, dim_b) amplitude grid, modified nowhere (pure).
    w: sqrt(j*n) weight grid of shape (dim_a-1, dim_b-1).
    cu, cd: scaled raising/lowering couplings g e^{+-i phi} / bound.
    coeff: complex Chebyshev coefficients including the (-i)^k J_k factors.
    """
    if USE_NUMBA and not force_numpy:
        return _cheb_pair_evolve_numba(psi, w, cu, cd, coeff)
    return _cheb_pair_evolve_numpy(psi, w, cu, cd, coeff)


# ---------------------------------------------------------------------------
# Dense matrix exponential action: segmented Taylor series.
#
# e^M v = (e^{M/s})^s v with s chosen so the per-segment series converges in
# a moderate number of terms; the series for each segment stops once the term
# norm drops below tol * |partial sum| / s.
# ---------------------------------------------------------------------------


def _expm_taylor_numpy(mat, vec, segments, tol, max_terms):
    v = vec.copy()
    for _ in range(segments):
        w = v.copy()
        term = v.copy()
        converged = False
        for k in range(1, max_terms + 1):
            term = mat @ term
            term /= k * segments
            w += term
            if np.linalg.norm(term) <= tol * np.linalg.norm(w):
                converged = True
                break
        if not converged:
            return v, False
        v = w
    return v, True


if USE_NUMBA:

    @_nb.njit(cache=True)
    def _expm_taylor_numba(mat, vec, segments, tol, max_terms):  # pragma: no cover
        v = vec.copy()
        for _ in range(segments):
            w = v.copy()
            term = v.copy()
            converged = False
            for k in range(1, max_terms + 1):
                term = np.dot(mat, term)
                term = term / (k * segments)
                w = w + term
                if np.linalg.norm(term) <= tol * np.linalg.norm(w):
                    converged = True
                    break
            if not converged:
                return v, False
            v = w
        return v, True


def expm_taylor(mat, vec, segments, tol, max_terms, force_numpy=False):
    """Segmented Taylor evaluation of e^mat @ vec.

    Returns (result, converged).  ``segments`` should scale with the 1-norm
    of ``mat``; callers pick it and handle a False convergence flag.
    """
    if USE_NUMBA and not force_numpy:
        return _expm_taylor_numba(mat, vec, segments, tol, max_terms)
    return _expm_taylor_numpy(mat, vec, segments, tol, max_terms)


def pair_weights(dim_a: int, dim_b: int) -> np.ndarray:
    """sqrt(j*n) grid shared by both backends, j=1..dim_a-1, n=1..dim_b-1."""
    return np.sqrt(
        np.outer(np.arange(1.0, dim_a), np.arange(1.0, dim_b))
    )


def taylor_segments(norm_one: float, theta: float = 16.0) -> int:
    """Number of Taylor segments for a generator of given 1-norm."""
    return max(1, int(math.ceil(norm_one / theta)))
