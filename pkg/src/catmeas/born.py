"""Born-rule transformations and the correspondence between states and transformations.

Forward direction: a density operator ``rho`` gives the candidate whose
component on every space sends a POVM ``mu`` to ``E -> Tr[mu(E) rho]``.

Injectivity: two distinct states are separated by the two-outcome POVM
built from the positive spectral projector of their difference.

Inverse direction: the functional induced by a candidate is probed on an
informationally complete family of effects and the state is recovered by
solving the linear system of trace pairings; a functional that no state
induces shows up as a failed fit or an operator that is not a state.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import CatMeasError, DimMismatch, NotAState, SingularFrame, StatesEqual
from .functors import Povm, ProbabilityMeasure, make_measure
from .measurable import discrete_space
from .naturality import CandidateTransformation, born_candidate, extract_xi
from .operators import (
    DENSITY_TOL,
    DensityOperator,
    Effect,
    HermitianOperator,
    as_density,
    as_effect,
    identity_op,
    positive_projector,
    spectral,
    trace_pair,
)

STATES_EQUAL_TOL = 1e-10
MAX_CONDITION = 1e8
FIT_TOL = 1e-9

WITNESS_SPACE = discrete_space(["x", "x'"])


def born_measure(rho: DensityOperator, povm: Povm) -> ProbabilityMeasure:
    if rho.dim != povm.dim:
        raise DimMismatch(f"state dimension {rho.dim} vs POVM dimension {povm.dim}")
    return make_measure(povm.space, [trace_pair(e, rho) for e in povm.atom_effects])


def born_transformation(rho: DensityOperator) -> CandidateTransformation:
    return born_candidate(as_density(rho))


@dataclass
class WitnessResult:
    povm: Povm
    projector: HermitianOperator
    gap: float
    projector_rank: int
    eps: float
    eigenvalue_sum: float

    def to_dict(self) -> dict[str, Any]:
        from .jsonio import povm_to_json, operator_to_json

        return {
            "povm": povm_to_json(self.povm),
            "projector": operator_to_json(self.projector),
            "gap": self.gap,
            "projector_rank": self.projector_rank,
            "eps": self.eps,
            "eigenvalue_sum": self.eigenvalue_sum,
        }


def injectivity_witness(
    rho: DensityOperator, sigma: DensityOperator, tol: float = STATES_EQUAL_TOL
) -> WitnessResult:
    """Two-outcome POVM ``{P, 1 - P}`` on which ``rho`` and ``sigma`` differ.

    ``P`` projects onto the eigenvalues of ``rho - sigma`` above half the
    largest one. The gap ``Tr[P rho] - Tr[P sigma]`` equals the sum of
    those eigenvalues (``eigenvalue_sum``) and is strictly positive.
    """
    if rho.dim != sigma.dim:
        raise DimMismatch(f"dimension {rho.dim} vs {sigma.dim}")
    delta = rho - sigma
    if float(np.max(np.abs(delta.matrix))) <= tol:
        raise StatesEqual(f"states agree to within {tol:.1e}; no witness exists")
    dec = spectral(delta)
    top = dec.levels[0]
    if top <= 0:  # pragma: no cover - impossible for distinct unit-trace states
        raise StatesEqual("difference has no positive eigenvalue")
    eps = top / 2
    p = positive_projector(delta, eps)
    rank = int(round(p.trace()))
    povm = Povm(WITNESS_SPACE, (as_effect(p), as_effect(identity_op(p.dim) - p)))
    gap = trace_pair(p, rho) - trace_pair(p, sigma)
    eig_sum = float(sum(lam for lam in dec.eigenvalues if lam > eps))
    return WitnessResult(povm, p, gap, rank, eps, eig_sum)


def gell_mann_basis(dim: int) -> list[np.ndarray]:
    """Identity followed by the symmetric, antisymmetric and diagonal generalized Gell-Mann matrices."""
    ops = [np.eye(dim, dtype=np.complex128)]
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=np.complex128)
            s[j, k] = s[k, j] = 1
            ops.append(s)
            a = np.zeros((dim, dim), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            ops.append(a)
    for l in range(1, dim):
        diag = np.zeros(dim)
        diag[:l] = 1
        diag[l] = -l
        ops.append(np.diag(np.sqrt(2 / (l * (l + 1))) * diag).astype(np.complex128))
    return ops


@dataclass(frozen=True, eq=False)
class EffectBasis:
    """Effects ``M_k = (B_k + c_k 1) / s_k`` built from a Hermitian operator basis ``B_k``."""

    dim: int
    effects: tuple[Effect, ...]
    frame_operators: tuple[HermitianOperator, ...]
    offsets: tuple[float, ...]
    scales: tuple[float, ...]
    gram: np.ndarray
    condition_number: float


def ic_effect_basis(dim: int) -> EffectBasis:
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    frame, effects, offsets, scales = [], [], [], []
    for b in gell_mann_basis(dim):
        op = HermitianOperator(b)
        w = op.eigvals()
        c = max(0.0, -float(w[0]))
        s = max(1.0, float(w[-1]) + c)
        frame.append(op)
        offsets.append(c)
        scales.append(s)
        effects.append(as_effect(HermitianOperator((b + c * np.eye(dim)) / s)))
    gram = np.array([[trace_pair(a, b) for b in frame] for a in frame])
    cond = float(np.linalg.cond(gram))
    return EffectBasis(dim, tuple(effects), tuple(frame), tuple(offsets), tuple(scales), gram, cond)


@dataclass
class Reconstruction:
    state: DensityOperator
    residual: float
    condition_number: float


def _fit(t: CandidateTransformation, basis: EffectBasis, max_condition: float):
    if basis.condition_number > max_condition:
        raise SingularFrame(f"frame Gram condition number {basis.condition_number:.3e}")
    probes = np.array([extract_xi(t, m, validate=False) for m in basis.effects])
    # Tr[rho B_k] = s_k * xi(M_k) - c_k
    pairings = np.asarray(basis.scales) * probes - np.asarray(basis.offsets)
    coeffs = np.linalg.solve(basis.gram, pairings)
    mat = sum(x * b.matrix for x, b in zip(coeffs, basis.frame_operators))
    return HermitianOperator(mat)


def fit_residual(t: CandidateTransformation, op: HermitianOperator, basis: EffectBasis) -> float:
    """Max gap between the candidate's functional and ``Tr[op .]`` on held-out probes.

    Probes are the complements ``1 - M_k`` and halves ``M_k / 2`` of the
    basis effects, which only an additive functional fits exactly.
    """
    one = identity_op(basis.dim)
    worst = 0.0
    for m in basis.effects:
        for probe in (one - m, m * 0.5):
            worst = max(worst, abs(extract_xi(t, probe, validate=False) - trace_pair(op, probe)))
    return worst


def reconstruct_report(
    t: CandidateTransformation,
    dim: int,
    tol: float = DENSITY_TOL,
    fit_tol: float = FIT_TOL,
    max_condition: float = MAX_CONDITION,
) -> Reconstruction:
    """Recover the density operator inducing ``t``, with the fit residual.

    Raises
    ------
    NotAState
        The probed functional is not ``Tr[rho .]`` for any density operator:
        either the held-out probes disagree with the linear fit by more than
        ``fit_tol``, or the fitted operator is not PSD of unit trace.
    SingularFrame
        The probe family's Gram matrix is too ill-conditioned.
    """
    if t.dim != dim:
        raise DimMismatch(f"candidate dimension {t.dim} vs requested {dim}")
    basis = ic_effect_basis(dim)
    op = _fit(t, basis, max_condition)
    residual = fit_residual(t, op, basis)
    if residual > fit_tol:
        raise NotAState(f"functional is not linear on effects: fit residual {residual:.3e}")
    try:
        state = as_density(op, tol=tol)
    except CatMeasError as exc:
        raise NotAState(f"fitted operator is not a state: {exc}") from None
    return Reconstruction(state, residual, basis.condition_number)


def reconstruct(t: CandidateTransformation, dim: int, tol: float = DENSITY_TOL) -> DensityOperator:
    return reconstruct_report(t, dim, tol).state
