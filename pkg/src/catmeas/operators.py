"""Hermitian operators on a d-dimensional Hilbert space.

Operators wrap read-only ``complex128`` arrays. :class:`Effect` and
:class:`DensityOperator` are the same storage with stronger spectral
guarantees, obtained through :func:`as_effect` and :func:`as_density`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatch,
    EigensolverFailure,
    NonRealTrace,
    NotAnEffect,
    NotHermitian,
    NotPSD,
    NotSquare,
    TraceNotOne,
)

HERMITIAN_TOL = 1e-9
EFFECT_TOL = 1e-9
DENSITY_TOL = 1e-9
DEGENERACY_TOL = 1e-8
IMAG_TOL = 1e-10


class HermitianOperator:
    """Self-adjoint ``d x d`` matrix.

    The constructor takes the Hermitian part of its input without complaint
    (a no-op on exactly Hermitian data); use :func:`make_hermitian` to
    reject inputs that are far from Hermitian.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=np.complex128)
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigvals(self) -> np.ndarray:
        """Ascending real eigenvalues."""
        return np.linalg.eigvalsh(self.matrix)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        _check_dims(self, other)
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        _check_dims(self, other)
        return HermitianOperator(self.matrix - other.matrix)

    def __neg__(self) -> HermitianOperator:
        return HermitianOperator(-self.matrix)

    def __mul__(self, scalar: float) -> HermitianOperator:
        return HermitianOperator(float(scalar) * self.matrix)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> HermitianOperator:
        return HermitianOperator(self.matrix / float(scalar))

    def max_abs_diff(self, other: HermitianOperator) -> float:
        _check_dims(self, other)
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def frobenius_distance(self, other: HermitianOperator) -> float:
        _check_dims(self, other)
        return float(np.linalg.norm(self.matrix - other.matrix))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class Effect(HermitianOperator):
    """Operator with spectrum in [0, 1]."""


class DensityOperator(HermitianOperator):
    """Positive semidefinite operator of unit trace."""


def _check_dims(a: HermitianOperator, b: HermitianOperator) -> None:
    if a.dim != b.dim:
        raise DimMismatch(f"dimension {a.dim} vs {b.dim}")


def make_hermitian(entries, tol: float = HERMITIAN_TOL) -> HermitianOperator:
    """Validate near-Hermitian input and store its Hermitian part (A + A^H)/2."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise NotSquare(f"expected a nonempty square matrix, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.conj().T)))
    if asym > tol:
        raise NotHermitian(f"max |A - A^H| = {asym:.3e} exceeds {tol:.1e}")
    return HermitianOperator(m)


def identity_op(dim: int) -> HermitianOperator:
    return HermitianOperator(np.eye(dim))


def zero_op(dim: int) -> HermitianOperator:
    return HermitianOperator(np.zeros((dim, dim)))


def as_effect(op: HermitianOperator, tol: float = EFFECT_TOL) -> Effect:
    w = op.eigvals()
    if w[0] < -tol:
        raise NotAnEffect(f"eigenvalue {w[0]:.6g} below 0")
    if w[-1] > 1 + tol:
        raise NotAnEffect(f"eigenvalue {w[-1]:.6g} above 1")
    return Effect(op.matrix)


def as_density(op: HermitianOperator, tol: float = DENSITY_TOL) -> DensityOperator:
    w = op.eigvals()
    if w[0] < -tol:
        raise NotPSD(f"eigenvalue {w[0]:.6g} is negative")
    tr = op.trace()
    if abs(tr - 1) > tol:
        raise TraceNotOne(f"trace {tr:.12g} differs from 1")
    return DensityOperator(op.matrix)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending, with multiplicity) and one projector per distinct eigenvalue.

    ``levels[k]`` is the eigenvalue shared by ``eigenprojectors[k]``.
    """

    eigenvalues: tuple[float, ...]
    levels: tuple[float, ...]
    eigenprojectors: tuple[HermitianOperator, ...]

    def reconstruct(self) -> HermitianOperator:
        return HermitianOperator(sum(lam * p.matrix for lam, p in zip(self.levels, self.eigenprojectors)))


def spectral(op: HermitianOperator, degeneracy_tol: float = DEGENERACY_TOL) -> SpectralDecomposition:
    """Eigendecomposition with near-degenerate eigenvalues grouped into one projector.

    An eigenvalue joins the current group when it lies within
    ``degeneracy_tol`` of the group's largest member.
    """
    try:
        w, v = np.linalg.eigh(op.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK non-convergence
        raise EigensolverFailure(str(exc)) from exc
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    groups: list[list[int]] = []
    for i, lam in enumerate(w):
        if groups and w[groups[-1][0]] - lam <= degeneracy_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    levels, projectors = [], []
    for g in groups:
        vg = v[:, g]
        levels.append(float(np.mean(w[g])))
        projectors.append(HermitianOperator(vg @ vg.conj().T))
    return SpectralDecomposition(tuple(float(x) for x in w), tuple(levels), tuple(projectors))


def positive_projector(op: HermitianOperator, eps: float) -> HermitianOperator:
    """Spectral projector onto eigenvalues strictly greater than ``eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    dec = spectral(op)
    out = np.zeros_like(op.matrix)
    for lam, p in zip(dec.levels, dec.eigenprojectors):
        if lam > eps:
            out = out + p.matrix
    return HermitianOperator(out)


def trace_pair(a: HermitianOperator, b: HermitianOperator, imag_tol: float = IMAG_TOL) -> float:
    """Tr[ab] for Hermitian ``a`` and ``b`` (real up to rounding)."""
    _check_dims(a, b)
    t = np.einsum("ij,ji->", a.matrix, b.matrix)
    if abs(t.imag) > imag_tol:
        raise NonRealTrace(f"Tr[ab] has imaginary part {t.imag:.3e}")
    return float(t.real)


def sqrtm_psd(op: HermitianOperator) -> HermitianOperator:
    """Principal square root of a positive semidefinite operator (negative rounding clipped)."""
    w, v = np.linalg.eigh(op.matrix)
    w = np.sqrt(np.clip(w, 0.0, None))
    return HermitianOperator((v * w) @ v.conj().T)
