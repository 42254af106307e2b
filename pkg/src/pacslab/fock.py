"""Truncated-Fock-space states, operators and the brute-force evolution oracle.

Everything is dense complex128 over the number basis |0>..|dim-1>.  All
values are treated as immutable after construction and every operation is a
pure function of its inputs, so parameter sweeps can run concurrently.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from . import backend
from .errors import (
    DimensionMismatchError,
    EmptyBranchError,
    NumericalFailureError,
    TruncationError,
)

NORMALIZED_ATOL = 1e-12
DEFAULT_TAIL_TOL = 1e-12
DEFAULT_EXPM_TOL = 1e-12
EXPM_MAX_TERMS = 160


@dataclass(eq=False)
class FockVector:
    """Amplitudes of a single-mode state, amp[n] = <n|psi>."""

    amp: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amp = np.ascontiguousarray(self.amp, dtype=np.complex128)
        if self.amp.ndim != 1 or self.dim < 1:
            raise ValueError("FockVector needs a 1-d amplitude array, dim >= 1")

    @property
    def dim(self) -> int:
        return self.amp.shape[0]

    def norm_sq(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)


@dataclass(eq=False)
class OperatorMatrix:
    """Dense matrix realization of a single-mode operator."""

    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        self.entries = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if (
            self.entries.ndim != 2
            or self.entries.shape[0] != self.entries.shape[1]
            or self.dim < 1
        ):
            raise ValueError("OperatorMatrix needs a square array, dim >= 1")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T.copy(), hermitian=self.hermitian)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"operator dims differ: {self.dim} vs {other.dim}"
            )
        return OperatorMatrix(self.entries @ other.entries)


@dataclass(eq=False)
class TwoModeState:
    """Bipartite amplitudes, amp[n, m] = <n|_a <m|_b psi."""

    amp: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amp = np.ascontiguousarray(self.amp, dtype=np.complex128)
        if self.amp.ndim != 2 or self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("TwoModeState needs a 2-d amplitude grid")

    @property
    def dim_a(self) -> int:
        return self.amp.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amp.shape[1]

    def norm_sq(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)


def default_dim(alpha: complex) -> int:
    """Truncation keeping the coherent tail below ~1e-14 for |alpha| <= 1.5."""
    a = abs(alpha)
    return max(32, int(math.ceil(a * a + 8.0 * a + 16.0)))


def annihilation_matrix(dim: int) -> OperatorMatrix:
    """Ladder matrix with entries[n-1, n] = sqrt(n)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    m = np.zeros((dim, dim), dtype=np.complex128)
    ns = np.arange(1, dim)
    m[ns - 1, ns] = np.sqrt(ns)
    return OperatorMatrix(m)


def creation_matrix(dim: int) -> OperatorMatrix:
    return annihilation_matrix(dim).dagger()


def number_matrix(dim: int) -> OperatorMatrix:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return OperatorMatrix(np.diag(np.arange(dim, dtype=np.complex128)), hermitian=True)


def coherent_tail_mass(alpha: complex, dim: int) -> float:
    """Analytic Poisson tail sum_{n>=dim} |<n|alpha>|^2."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    mu = abs(alpha) ** 2
    if mu == 0.0:
        return 0.0
    return float(gammainc(dim, mu))


def coherent_state(
    alpha: complex, dim: int, tail_tol: float = DEFAULT_TAIL_TOL
) -> FockVector:
    """Coherent state amplitudes e^{-|a|^2/2} a^n / sqrt(n!).

    Raises TruncationError when the analytic Poisson tail beyond the
    truncation exceeds ``tail_tol``; the vector is flagged normalized only
    when that tail is below 1e-12.
    """
    tail = coherent_tail_mass(alpha, dim)
    if tail > tail_tol:
        raise TruncationError(
            f"dim={dim} too small for coherent amplitude {alpha}", tail
        )
    amp = np.zeros(dim, dtype=np.complex128)
    amp[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, dim):
        amp[n] = amp[n - 1] * alpha / math.sqrt(n)
    return FockVector(amp, normalized=tail <= NORMALIZED_ATOL)


def fock_state(n: int, dim: int) -> FockVector:
    if not 0 <= n < dim:
        raise ValueError(f"fock index {n} outside dim {dim}")
    amp = np.zeros(dim, dtype=np.complex128)
    amp[n] = 1.0
    return FockVector(amp, normalized=True)


def inner_product(psi: FockVector, phi: FockVector) -> complex:
    """<psi|phi> = sum conj(psi[n]) phi[n]."""
    if psi.dim != phi.dim:
        raise DimensionMismatchError(f"dims differ: {psi.dim} vs {phi.dim}")
    return complex(np.vdot(psi.amp, phi.amp))


def fidelity(psi: FockVector, phi: FockVector) -> float:
    """|<psi|phi>|^2 between the normalized states."""
    ov = inner_product(psi, phi)
    return abs(ov) ** 2 / (psi.norm_sq() * phi.norm_sq())


def apply_operator(m: OperatorMatrix, psi: FockVector) -> FockVector:
    if m.dim != psi.dim:
        raise DimensionMismatchError(f"dims differ: {m.dim} vs {psi.dim}")
    return FockVector(m.entries @ psi.amp)


def expm_apply(
    m: OperatorMatrix,
    psi: FockVector,
    tol: float = DEFAULT_EXPM_TOL,
    max_terms: int = EXPM_MAX_TERMS,
) -> FockVector:
    """e^M psi by a segmented Taylor series with term-norm stopping.

    Deterministic for fixed inputs; relative accuracy ~tol.  Raises
    NumericalFailureError when a segment fails to converge in ``max_terms``.
    """
    if m.dim != psi.dim:
        raise DimensionMismatchError(f"dims differ: {m.dim} vs {psi.dim}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    norm_one = float(np.max(np.sum(np.abs(m.entries), axis=0))) if m.dim else 0.0
    segments = backend.taylor_segments(norm_one)
    out, converged = backend.expm_taylor(
        m.entries, psi.amp, segments, tol / (2.0 * segments), max_terms
    )
    if not converged:
        raise NumericalFailureError(
            f"expm_apply: no convergence in {max_terms} terms per segment "
            f"(segments={segments}, 1-norm={norm_one:.3e})"
        )
    if not np.all(np.isfinite(out)):
        raise NumericalFailureError("expm_apply produced non-finite amplitudes")
    return FockVector(out)


def tensor_product(a: FockVector, b: FockVector) -> TwoModeState:
    """|a>_a |b>_b on the truncated bipartite grid."""
    return TwoModeState(
        np.outer(a.amp, b.amp),
        normalized=a.normalized and b.normalized,
    )


def project_b(state: TwoModeState, m: int) -> tuple[FockVector, float]:
    """Condition on the b-mode number outcome m.

    Returns the renormalized a-mode state and the outcome probability;
    raises EmptyBranchError instead of dividing by a zero probability.
    """
    if not 0 <= m < state.dim_b:
        raise ValueError(f"b-mode index {m} outside dim_b {state.dim_b}")
    col = state.amp[:, m]
    prob = float(np.vdot(col, col).real)
    if prob <= 0.0:
        raise EmptyBranchError(f"b-mode outcome {m} has zero probability")
    return FockVector(col / math.sqrt(prob), normalized=True), prob


def number_moments(psi: FockVector) -> tuple[float, float]:
    """(mean, variance) of the photon number of the normalized state."""
    p = np.abs(psi.amp) ** 2
    p = p / p.sum()
    ns = np.arange(psi.dim)
    mean = float(np.dot(p, ns))
    var = float(np.dot(p, (ns - mean) ** 2))
    return mean, var
