"""
States, priors, POVMs and the measurement channel.

The classical register that records a measurement outcome is the computational
basis of an m-dimensional space, so ``measurement_channel_output`` always
returns a diagonal operator.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, NonPositiveBeta, ValidationError
from .linop import (DEFAULT_TOLERANCE, Tolerance, as_matrix, eig_hermitian,
                    frobenius, hermitian_part, is_full_rank)

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-10
CLOSURE_TOL = 1e-9
PROBABILITY_TOL = 1e-10
NEGATIVE_CLIP = 1e-12


def _frozen(mat: np.ndarray) -> np.ndarray:
    out = np.array(mat, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def _check_psd(mat: np.ndarray, tol: Tolerance, what: str) -> None:
    values = eig_hermitian(mat, tol).eigenvalues
    floor = tol.eig_cut * max(1.0, float(np.max(np.abs(values))))
    if values[-1] < -floor:
        raise ValidationError(f"{what} positivity", -values[-1], f"smallest eigenvalue {values[-1]:.3e}")


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Used for states, reference priors and normalized process operators.
    The matrix is symmetrized on construction and stored read-only.
    """
    mat: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        herm = hermitian_part(self.mat, self.tol)
        trace = float(np.trace(herm).real)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError("density operator unit trace", abs(trace - 1.0), f"trace is {trace:.12f}")
        _check_psd(herm, self.tol, "density operator")
        object.__setattr__(self, "mat", _frozen(herm))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return eig_hermitian(self.mat, self.tol).eigenvalues

    def is_full_rank(self) -> bool:
        return is_full_rank(self.mat, self.tol)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim) / dim)

    @classmethod
    def pure(cls, vector: Sequence[complex]) -> "DensityOperator":
        """Projector onto a (normalized) state vector."""
        psi = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ValidationError("pure state normalization", 1.0, "zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def from_spectrum(cls, eigenvalues: Sequence[float], basis: Optional[np.ndarray] = None) -> "DensityOperator":
        """Build ``U diag(eigenvalues) U^dagger`` (``U`` defaults to the identity)."""
        values = np.asarray(eigenvalues, dtype=float)
        if basis is None:
            return cls(np.diag(values).astype(complex))
        u = as_matrix(basis)
        if u.shape[0] != values.shape[0]:
            raise DimensionMismatch(f"Basis of dimension {u.shape[0]} for {values.shape[0]} eigenvalues")
        return cls((u * values) @ u.conj().T)


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered list of PSD effects summing to the identity."""
    effects: Tuple[np.ndarray, ...]
    tol: Tolerance = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        effects = tuple(hermitian_part(e, self.tol) for e in self.effects)
        if not effects:
            raise ValidationError("povm non-empty", 1.0, "no effects given")
        dim = effects[0].shape[0]
        for index, effect in enumerate(effects):
            if effect.shape != (dim, dim):
                raise DimensionMismatch(f"Effect {index} has shape {effect.shape}, expected {(dim, dim)}")
            _check_psd(effect, self.tol, f"povm effect {index}")
        closure = frobenius(sum(effects) - np.eye(dim))
        if closure > CLOSURE_TOL:
            raise ValidationError("povm closure", closure, "effects do not sum to the identity")
        object.__setattr__(self, "effects", tuple(_frozen(e) for e in effects))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def num_outcomes(self) -> int:
        return len(self.effects)

    def stacked(self) -> np.ndarray:
        """Effects as an ``(m, d, d)`` array."""
        return np.stack(self.effects)

    def volumes(self) -> np.ndarray:
        """``V_y = Tr[Pi_y]``."""
        return np.array([float(np.trace(e).real) for e in self.effects])

    @classmethod
    def projective(cls, vectors: Iterable[Sequence[complex]]) -> "Povm":
        """Rank-1 projective POVM from an orthonormal list of vectors."""
        effects = []
        for v in vectors:
            psi = np.asarray(v, dtype=complex).ravel()
            effects.append(np.outer(psi, psi.conj()))
        return cls(tuple(effects))

    @classmethod
    def computational(cls, dim: int) -> "Povm":
        return cls.projective(np.eye(dim))

    @classmethod
    def trivial(cls, dim: int) -> "Povm":
        return cls((np.eye(dim, dtype=complex),))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], basis: Optional[np.ndarray] = None) -> "Povm":
        """Projective POVM ``Pi_y = sum_{k in K(y)} |k><k|`` for disjoint index blocks."""
        dim = sum(len(block) for block in blocks)
        u = np.eye(dim, dtype=complex) if basis is None else as_matrix(basis)
        effects = []
        for block in blocks:
            cols = u[:, list(block)]
            effects.append(cols @ cols.conj().T)
        return cls(tuple(effects))


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probability vector over a finite outcome set."""
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).ravel()
        if probs.size == 0:
            raise ValidationError("distribution non-empty", 1.0)
        if np.any(probs < 0):
            raise ValidationError("distribution nonnegativity", float(-probs.min()))
        deviation = abs(float(probs.sum()) - 1.0)
        if deviation > PROBABILITY_TOL:
            raise ValidationError("distribution normalization", deviation)
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Column-stochastic matrix ``w[z, y]`` with ``sum_z w[z, y] = 1``."""
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2 or w.size == 0:
            raise DimensionMismatch(f"Stochastic matrix must be a non-empty 2-D array, got shape {w.shape}")
        if np.any(w < 0):
            raise ValidationError("stochastic matrix nonnegativity", float(-w.min()))
        deviation = float(np.max(np.abs(w.sum(axis=0) - 1.0)))
        if deviation > PROBABILITY_TOL:
            raise ValidationError("stochastic matrix column sums", deviation)
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.w.shape

    @classmethod
    def identity(cls, size: int) -> "StochasticMatrix":
        return cls(np.eye(size))

    @classmethod
    def merge_all(cls, size: int) -> "StochasticMatrix":
        return cls(np.ones((1, size)))


def _check_dims(rho: DensityOperator, m: Povm) -> None:
    if rho.dim != m.dim:
        raise DimensionMismatch(f"State of dimension {rho.dim} measured with POVM of dimension {m.dim}")


def outcome_probabilities(rho, m: Povm) -> np.ndarray:
    """Raw ``Re Tr[Pi_y rho]`` without clipping, for PSD operators that need not be states."""
    mat = as_matrix(rho)
    if mat.shape[0] != m.dim:
        raise DimensionMismatch(f"Operator of dimension {mat.shape[0]} measured with POVM of dimension {m.dim}")
    return np.einsum("yij,ji->y", m.stacked(), mat).real


def measure(rho: DensityOperator, m: Povm) -> OutcomeDistribution:
    """Outcome distribution ``p_y = Tr[Pi_y rho]``.

    Roundoff negatives above ``-1e-12`` are clipped to zero. A total that
    misses one by no more than the trace and closure tolerances allow,
    ``TRACE_TOL + CLOSURE_TOL * ||rho||_F``, is renormalized.

    Raises:
        DimensionMismatch: If the state and POVM dimensions differ.
        ValidationError: If a probability is genuinely negative or the total
            is off by more than that budget.
    """
    _check_dims(rho, m)
    probs = outcome_probabilities(rho.mat, m)
    if np.any(probs < -NEGATIVE_CLIP):
        raise ValidationError("outcome probability nonnegativity", float(-probs.min()))
    if np.any(probs < 0):
        logger.debug(f"Clipping roundoff-negative probabilities {probs[probs < 0].tolist()}")
        probs = np.clip(probs, 0.0, None)
    total = float(probs.sum())
    deviation = abs(total - 1.0)
    budget = TRACE_TOL + CLOSURE_TOL * frobenius(rho.mat)
    if deviation > budget:
        raise ValidationError("outcome probability normalization", deviation,
                              f"exceeds the trace and povm closure budget {budget:.3e}")
    if deviation > 0:
        logger.debug(f"Renormalizing outcome probabilities with total {total!r}")
        probs = probs / total
    return OutcomeDistribution(probs)


def measurement_channel_output(rho: DensityOperator, m: Povm) -> DensityOperator:
    """``M(rho) = sum_y Tr[Pi_y rho] |y><y|`` on the m-dimensional register."""
    return DensityOperator(np.diag(measure(rho, m).probs).astype(complex), tol=rho.tol)


def gibbs_prior(energies: Sequence[float], beta: float) -> DensityOperator:
    """Thermal state ``exp(-beta H) / Tr exp(-beta H)`` for ``H = sum_n E_n |n><n|``.

    Raises:
        NonPositiveBeta: If ``beta`` is not a finite positive number.
    """
    if not np.isfinite(beta) or beta <= 0:
        raise NonPositiveBeta(f"Inverse temperature must be positive, got {beta}")
    e = np.asarray(energies, dtype=float).ravel()
    if e.size == 0:
        raise DimensionMismatch("Gibbs prior needs at least one energy level")
    weights = np.exp(-beta * (e - e.min()))
    return DensityOperator(np.diag(weights / weights.sum()).astype(complex))


def post_process(m: Povm, w) -> Povm:
    """Coarse-grained POVM ``Pi'_z = sum_y w[z, y] Pi_y``.

    Raises:
        DimensionMismatch: If ``w`` does not have one column per outcome of ``m``.
    """
    matrix = w if isinstance(w, StochasticMatrix) else StochasticMatrix(w)
    if matrix.shape[1] != m.num_outcomes:
        raise DimensionMismatch(
            f"Stochastic matrix has {matrix.shape[1]} columns for {m.num_outcomes} outcomes"
        )
    effects = np.einsum("zy,yij->zij", matrix.w, m.stacked())
    return Povm(tuple(effects), tol=m.tol)


def diagonal_povm(m: Povm, basis) -> Povm:
    """POVM pinched to a basis: ``Pi'_y = sum_x |x><x| Pi_y |x><x|`` with ``|x>`` the columns of ``basis``."""
    u = as_matrix(basis)
    if u.shape[0] != m.dim:
        raise DimensionMismatch(f"Basis of dimension {u.shape[0]} for POVM of dimension {m.dim}")
    diagonals = np.einsum("ix,yij,jx->yx", u.conj(), m.stacked(), u).real
    effects = tuple((u * row) @ u.conj().T for row in diagonals)
    return Povm(effects, tol=m.tol)
