"""Resonant two-level-atom / cavity-mode dynamics and conditional states.

The atom starts in its upper level with the cavity in a coherent state.  The
exact closed-form Rabi solution is the primary evolution path; the operator
power series of the evolution operator is kept as an independent check that
must converge to it.  Detecting the atom in the lower level leaves the
cavity in a photon-added superposition whose re-expansion over photon-added
coherent states is reconstructed here under selectable conventions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyBranchError, NumericalFailureError
from .fock import (
    FockVector,
    annihilation_matrix,
    apply_operator,
    coherent_state,
    creation_matrix,
    default_dim,
    inner_product,
)
from .pacs import PacsSpec, pacs_norm_sq, pacs_state
from .specialfn import stirling2

MIN_GROUND_PROB = 1e-14

BRACKET_VARIANTS = ("with_factorial", "plain")
BASIS_VARIANTS = ("raw", "normalized")


@dataclass(frozen=True)
class JcParams:
    """Initial coherent amplitude and dimensionless interaction phase.

    ``beta_t`` is the product of coupling constant and interaction time;
    unit conversion happens at the CLI boundary, not here.
    """

    alpha: complex
    beta_t: float
    dim: int | None = None

    def __post_init__(self):
        if self.beta_t < 0:
            raise ValueError("beta_t must be nonnegative")

    def resolved_dim(self) -> int:
        return self.dim if self.dim is not None else default_dim(self.alpha)


@dataclass(eq=False)
class JointAtomFieldState:
    """Cavity amplitudes paired with the upper (e) and lower (g) atom level."""

    field_e: FockVector
    field_g: FockVector

    def total_norm_sq(self) -> float:
        return self.field_e.norm_sq() + self.field_g.norm_sq()


def joint_fidelity(a: JointAtomFieldState, b: JointAtomFieldState) -> float:
    ov = inner_product(a.field_e, b.field_e) + inner_product(a.field_g, b.field_g)
    return abs(ov) ** 2 / (a.total_norm_sq() * b.total_norm_sq())


def jc_evolve_exact(p: JcParams) -> JointAtomFieldState:
    """Closed-form resonant Rabi evolution of |alpha>|e>.

    field_e[n] = c_n cos(beta_t sqrt(n+1)),
    field_g[n+1] = -i c_n sin(beta_t sqrt(n+1)), field_g[0] = 0.
    """
    dim = p.resolved_dim()
    c = coherent_state(p.alpha, dim).amp
    rabi = p.beta_t * np.sqrt(np.arange(1.0, dim + 1))
    fe = c * np.cos(rabi)
    fg = np.zeros(dim, dtype=np.complex128)
    fg[1:] = -1j * c[:-1] * np.sin(rabi[:-1])
    return JointAtomFieldState(FockVector(fe), FockVector(fg))


def jc_evolve_series(p: JcParams, n_terms: int) -> JointAtomFieldState:
    """Partial sums of the evolution-operator power series.

    Terms are built by repeated ladder-operator application: the even powers
    contribute (a a+)^n |alpha> to the upper branch, the odd powers
    a+ (a a+)^n |alpha> to the lower one.  Converges to jc_evolve_exact.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    dim = p.resolved_dim()
    create = creation_matrix(dim)
    annih = annihilation_matrix(dim)
    w = coherent_state(p.alpha, dim)
    tau = -1j * p.beta_t
    e_amp = np.zeros(dim, dtype=np.complex128)
    g_amp = np.zeros(dim, dtype=np.complex128)
    coef = 1.0 + 0.0j
    for n in range(n_terms):
        if n > 0:
            w = apply_operator(annih, apply_operator(create, w))
            coef *= tau * tau / ((2 * n - 1) * (2 * n))
        lifted = apply_operator(create, w)
        e_term = coef * w.amp
        g_term = (coef * tau / (2 * n + 1)) * lifted.amp
        if not (np.all(np.isfinite(e_term)) and np.all(np.isfinite(g_term))):
            raise NumericalFailureError(
                f"series term {n} non-finite at beta_t={p.beta_t}, dim={dim}; "
                "the partial sums are diverging"
            )
        e_amp += e_term
        g_amp += g_term
    return JointAtomFieldState(FockVector(e_amp), FockVector(g_amp))


def jc_conditional_ground(s: JointAtomFieldState) -> tuple[FockVector, float]:
    """Cavity state after detecting the atom in the lower level.

    Returns the normalized field and the detection probability.
    """
    prob = s.field_g.norm_sq()
    if prob <= 0.0:
        raise EmptyBranchError("lower-level branch has zero probability")
    return FockVector(s.field_g.amp / math.sqrt(prob), normalized=True), prob


def _expansion_weight(n: int, m: int, alpha: complex, bracket: str) -> complex:
    s_nm = stirling2(n, m) if m <= n else 0
    s_nm1 = stirling2(n, m - 1) if m - 1 <= n else 0
    if bracket == "with_factorial":
        inner = m * s_nm + s_nm1 * math.factorial(m) * alpha
    elif bracket == "plain":
        inner = m * s_nm + s_nm1
    else:
        raise ValueError(f"unknown bracket variant {bracket!r}")
    return alpha ** (m - 1) * inner


def expansion_coefficient(n: int, m: int, alpha: complex) -> complex:
    """Coefficient B(n, m, alpha) of the photon-added re-expansion, verbatim:

    alpha^{m-1} [m S(n,m) + S(n,m-1) m! alpha] sqrt(m! L_m(-|alpha|^2)).
    """
    norm = math.sqrt(pacs_norm_sq(PacsSpec(alpha, m)))
    return _expansion_weight(n, m, alpha, "with_factorial") * norm


@dataclass(eq=False)
class MpacsExpansion:
    """Coefficient table plus the convention-resolved reconstruction."""

    table: np.ndarray
    fidelities: dict
    best_convention: str
    best_fidelity: float
    reconstruction: FockVector
    oracle: FockVector
    detection_prob: float


def mpacs_expansion(
    p: JcParams, n_max: int, m_max: int | None = None
) -> MpacsExpansion:
    """Re-expand the conditional cavity state over photon-added states.

    ``table[n, m]`` holds the verbatim coefficient B(n, m, alpha).  Because
    the verbatim formula both carries the photon-added norm factor
    sqrt(m! L_m) and an m! alpha inside the bracket, the reconstruction is
    evaluated under all four combinations of bracket variant
    ("with_factorial" keeps the m! alpha, "plain" drops it) and basis state
    reading ("raw" = unnormalized, "normalized").  The convention with the
    highest fidelity against the conditional state of the exact evolution is
    recorded; the n = 0 row uses the table convention S(0, 0) = 1 so the
    leading single-addition term is present.
    """
    if m_max is None:
        m_max = n_max + 1
    # the highest-order basis state needs m_max levels of headroom
    dim = p.dim if p.dim is not None else default_dim(p.alpha) + m_max
    oracle_params = JcParams(p.alpha, p.beta_t, dim)
    table = np.zeros((n_max + 1, m_max + 1), dtype=np.complex128)
    for n in range(n_max + 1):
        for m in range(1, m_max + 1):
            table[n, m] = expansion_coefficient(n, m, p.alpha)

    oracle, prob = jc_conditional_ground(jc_evolve_exact(oracle_params))
    tau = -1j * p.beta_t
    # tau^{2n+1}/(2n+1)! prefactors, built incrementally
    prefs = np.zeros(n_max + 1, dtype=np.complex128)
    prefs[0] = tau
    for n in range(1, n_max + 1):
        prefs[n] = prefs[n - 1] * tau * tau / ((2 * n) * (2 * n + 1))

    kets_raw = [None] + [
        pacs_state(PacsSpec(p.alpha, m), dim).amp for m in range(1, m_max + 1)
    ]
    norms = [None] + [
        math.sqrt(pacs_norm_sq(PacsSpec(p.alpha, m))) for m in range(1, m_max + 1)
    ]

    fidelities = {}
    best = None
    reconstructions = {}
    for bracket in BRACKET_VARIANTS:
        for basis in BASIS_VARIANTS:
            rec = np.zeros(dim, dtype=np.complex128)
            for m in range(1, m_max + 1):
                ket = kets_raw[m] if basis == "raw" else kets_raw[m] / norms[m]
                weight = norms[m] * sum(
                    prefs[n] * _expansion_weight(n, m, p.alpha, bracket)
                    for n in range(n_max + 1)
                )
                rec += weight * ket
            name = f"{bracket}+{basis}"
            vec = FockVector(rec)
            fid = abs(inner_product(oracle, vec)) ** 2 / vec.norm_sq()
            fidelities[name] = fid
            reconstructions[name] = vec
            if best is None or fid > fidelities[best]:
                best = name

    return MpacsExpansion(
        table=table,
        fidelities=fidelities,
        best_convention=best,
        best_fidelity=fidelities[best],
        reconstruction=reconstructions[best],
        oracle=oracle,
        detection_prob=prob,
    )


@dataclass(frozen=True)
class CurvePoint:
    """One overlap sample; None marks an empty conditioning branch."""

    beta_t: float
    m: int
    overlap_modulus: float | None
    overlap_sq: float | None
    ground_prob: float


def jc_overlap_curve(
    alpha: complex,
    beta_t_grid,
    m_list,
    dim: int | None = None,
) -> list[CurvePoint]:
    """Overlap of the conditional cavity state with each normalized
    photon-added target, across the interaction grid.

    Both the modulus and its square are reported for every point.  Points
    where the detection probability falls below MIN_GROUND_PROB are emitted
    with null overlaps instead of a 0/0 artifact.
    """
    beta_t_grid = list(beta_t_grid)
    m_list = list(m_list)
    if not beta_t_grid or not m_list:
        raise ValueError("beta_t grid and m list must be nonempty")
    if dim is None:
        dim = default_dim(alpha)
    targets = {
        m: pacs_state(PacsSpec(alpha, m), dim, normalized=True) for m in m_list
    }
    points = []
    for bt in beta_t_grid:
        state = jc_evolve_exact(JcParams(alpha, bt, dim))
        prob = state.field_g.norm_sq()
        if prob < MIN_GROUND_PROB:
            for m in m_list:
                points.append(CurvePoint(bt, m, None, None, prob))
            continue
        cond = FockVector(state.field_g.amp / math.sqrt(prob), normalized=True)
        for m in m_list:
            ov = abs(inner_product(targets[m], cond))
            points.append(CurvePoint(bt, m, ov, ov * ov, prob))
    return points
