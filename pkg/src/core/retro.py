"""
Retrodiction: Petz recovery of the measurement channel, Choi operators,
input-output process operators and the classical prepare-and-measure tables.

Composite operators live on (B, A) = (outcome register, system), with the
register as the first tensor factor.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from .errors import DimensionMismatch, FalsifyingEvidence, ValidationError
from .linop import (DEFAULT_TOLERANCE, Tolerance, as_matrix, eig_hermitian,
                    frobenius, hermitian_part, kron, partial_trace, psd_sqrt,
                    transpose)
from .qstate import (DensityOperator, OutcomeDistribution, Povm, measure,
                     outcome_probabilities)

logger = logging.getLogger(__name__)

MARGINAL_TOL = 1e-9
TABLE_TOL = 1e-10


class ChoiDirection(Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


class ProcessKind(Enum):
    QF = "QF"
    QR = "QR"
    TQF = "tQF"
    TQR = "tQR"


def _check_psd_operator(mat: np.ndarray, tol: Tolerance, what: str) -> np.ndarray:
    herm = hermitian_part(mat, tol)
    values = eig_hermitian(herm, tol).eigenvalues
    floor = tol.eig_cut * max(1.0, float(np.max(np.abs(values))))
    if values[-1] < -floor:
        raise ValidationError(f"{what} positivity", -values[-1])
    out = herm.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ChoiOperator:
    """Choi operator of the measurement channel or of its Petz map.

    Attributes:
        mat: Operator on (B, A).
        direction: Forward channel or reverse (Petz) channel.
        dims: ``(m, d)``, the register and system dimensions.
    """
    mat: np.ndarray
    direction: ChoiDirection
    dims: Tuple[int, int]
    tol: Tolerance = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        mat = _check_psd_operator(self.mat, self.tol, "Choi operator")
        m, d = self.dims
        if mat.shape[0] != m * d:
            raise DimensionMismatch(f"Choi operator of dimension {mat.shape[0]} for dims {self.dims}")
        # trace preservation of the underlying channel
        if self.direction is ChoiDirection.FORWARD:
            residual = frobenius(partial_trace(mat, self.dims, "first") - np.eye(d))
        else:
            residual = frobenius(partial_trace(mat, self.dims, "second") - np.eye(m))
        if residual > MARGINAL_TOL:
            raise ValidationError("Choi operator trace preservation", residual)
        object.__setattr__(self, "mat", mat)


@dataclass(frozen=True, eq=False)
class ProcessOperator:
    """Unit-trace PSD operator on (B, A) describing input and output of a process."""
    mat: np.ndarray
    kind: ProcessKind
    dims: Tuple[int, int]
    tol: Tolerance = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        mat = _check_psd_operator(self.mat, self.tol, f"{self.kind.value} operator")
        m, d = self.dims
        if mat.shape[0] != m * d:
            raise DimensionMismatch(f"{self.kind.value} of dimension {mat.shape[0]} for dims {self.dims}")
        trace = float(np.trace(mat).real)
        if abs(trace - 1.0) > MARGINAL_TOL:
            raise ValidationError(f"{self.kind.value} unit trace", abs(trace - 1.0))
        object.__setattr__(self, "mat", mat)

    def output_marginal(self) -> np.ndarray:
        """``Tr_A``: the operator left on the outcome register B."""
        return partial_trace(self.mat, self.dims, "second")

    def input_marginal(self) -> np.ndarray:
        """``Tr_B``: the operator left on the system A."""
        return partial_trace(self.mat, self.dims, "first")

    def eigenvalues(self) -> np.ndarray:
        return eig_hermitian(self.mat, self.tol).eigenvalues


@dataclass(frozen=True, eq=False)
class JointTable:
    """Joint distribution ``P(x, y)``; rows are preparations, columns outcomes."""
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 2:
            raise DimensionMismatch(f"Joint table must be 2-D, got shape {table.shape}")
        if np.any(table < 0):
            raise ValidationError("joint table nonnegativity", float(-table.min()))
        deviation = abs(float(table.sum()) - 1.0)
        if deviation > TABLE_TOL:
            raise ValidationError("joint table normalization", deviation)
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def marginal_x(self) -> np.ndarray:
        return self.table.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def flat(self) -> np.ndarray:
        return self.table.ravel()


def _unit(size: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((size, size), dtype=complex)
    e[i, j] = 1.0
    return e


def prior_outcome_weights(m: Povm, gamma: DensityOperator) -> np.ndarray:
    """``G_y = Tr[Pi_y gamma]``."""
    return np.clip(outcome_probabilities(gamma.mat, m), 0.0, None)


def retrodiction_weights(q: np.ndarray, prior_weights: np.ndarray, tol: Tolerance) -> np.ndarray:
    """``q_y / G_y`` with the convention ``0/0 = 0``.

    Raises:
        FalsifyingEvidence: If an outcome with ``q_y > support_tol`` has ``G_y <= eig_cut``.
    """
    impossible = prior_weights <= tol.eig_cut
    falsified = impossible & (q > tol.support_tol)
    if np.any(falsified):
        outcomes = np.flatnonzero(falsified).tolist()
        raise FalsifyingEvidence(
            f"Outcomes {outcomes} carry weight {q[falsified].tolist()} but have prior probability "
            f"{prior_weights[falsified].tolist()}"
        )
    weights = np.zeros_like(q, dtype=float)
    weights[~impossible] = q[~impossible] / prior_weights[~impossible]
    return weights


def _require_all_outcomes_possible(prior_weights: np.ndarray, tol: Tolerance) -> None:
    impossible = np.flatnonzero(prior_weights <= tol.eig_cut)
    if impossible.size:
        raise FalsifyingEvidence(
            f"Prior gives zero probability to outcomes {impossible.tolist()}; their retrodiction is undefined"
        )


def petz_map_apply(m: Povm, gamma: DensityOperator, tau,
                   tol: Tolerance = DEFAULT_TOLERANCE) -> DensityOperator:
    """Petz recovery ``sum_y <y|tau|y> / Tr[Pi_y gamma] sqrt(gamma) Pi_y sqrt(gamma)``.

    Args:
        m: Measurement defining the channel.
        gamma: Reference prior on the system.
        tau: State of the outcome register (dimension ``m.num_outcomes``),
            arbitrary new evidence about the outcomes.
        tol: Numerical thresholds.

    Raises:
        FalsifyingEvidence: If ``tau`` weights an outcome the prior rules out.
    """
    tau_mat = as_matrix(tau)
    if tau_mat.shape[0] != m.num_outcomes:
        raise DimensionMismatch(f"Register state of dimension {tau_mat.shape[0]} for {m.num_outcomes} outcomes")
    if gamma.dim != m.dim:
        raise DimensionMismatch(f"Prior of dimension {gamma.dim} for POVM of dimension {m.dim}")
    q = np.clip(np.diag(tau_mat).real, 0.0, None)
    prior_weights = prior_outcome_weights(m, gamma)
    weights = retrodiction_weights(q, prior_weights, tol)
    root = psd_sqrt(gamma.mat, tol)
    result = root @ np.einsum("y,yij->ij", weights, m.stacked()) @ root
    dropped = float(q[prior_weights <= tol.eig_cut].sum())
    if dropped > 0:
        logger.debug(f"Renormalizing Petz output after dropping register weight {dropped:.3e}")
        result = result / np.trace(result).real
    return DensityOperator(result, tol=tol)


def _petz_linear(m: Povm, root_gamma: np.ndarray, prior_weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Petz map on an arbitrary register operator; only its diagonal survives the adjoint channel."""
    weights = np.diag(x) / prior_weights
    return root_gamma @ np.einsum("y,yij->ij", weights, m.stacked()) @ root_gamma


def choi_forward(m: Povm) -> ChoiOperator:
    """``C_M = sum_y |y><y| (x) Pi_y^T`` on (B, A)."""
    size = m.num_outcomes
    mat = sum(kron(_unit(size, y, y), transpose(effect)) for y, effect in enumerate(m.effects))
    return ChoiOperator(mat, ChoiDirection.FORWARD, (size, m.dim), tol=m.tol)


def choi_reverse(m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> ChoiOperator:
    """``C_rev = sum_{k,l} |k><l| (x) Petz(|k><l|)`` on (B, A).

    Raises:
        FalsifyingEvidence: If the prior makes some outcome impossible.
    """
    prior_weights = prior_outcome_weights(m, gamma)
    _require_all_outcomes_possible(prior_weights, tol)
    size = m.num_outcomes
    root = psd_sqrt(gamma.mat, tol)
    mat = np.zeros((size * m.dim, size * m.dim), dtype=complex)
    for k in range(size):
        for l in range(size):
            unit = _unit(size, k, l)
            mat += kron(unit, _petz_linear(m, root, prior_weights, unit))
    return ChoiOperator(mat, ChoiDirection.REVERSE, (size, m.dim), tol=tol)


def choi_relation_residual(m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Frobenius residual of ``C_rev^T = (M(gamma)^-1/2 (x) sqrt(gamma^T)) C_M (same)``."""
    reverse = choi_reverse(m, gamma, tol)
    prior_weights = prior_outcome_weights(m, gamma)
    left = kron(np.diag(1.0 / np.sqrt(prior_weights)), psd_sqrt(transpose(gamma.mat), tol))
    expected = left @ choi_forward(m).mat @ left
    return frobenius(transpose(reverse.mat) - expected)


def sqrt_choi(m: Povm) -> np.ndarray:
    """``sqrt(C_M) = sum_y |y><y| (x) sqrt(Pi_y^T)``, computed block by block."""
    size = m.num_outcomes
    return sum(kron(_unit(size, y, y), psd_sqrt(transpose(effect), m.tol)) for y, effect in enumerate(m.effects))


def _check_pair(rho: DensityOperator, m: Povm) -> None:
    if rho.dim != m.dim:
        raise DimensionMismatch(f"State of dimension {rho.dim} with POVM of dimension {m.dim}")


def q_forward(rho: DensityOperator, m: Povm) -> ProcessOperator:
    """``Q_F = (1_B (x) sqrt(rho^T)) C_M (1_B (x) sqrt(rho^T))``."""
    _check_pair(rho, m)
    side = kron(np.eye(m.num_outcomes), psd_sqrt(transpose(rho.mat), rho.tol))
    mat = side @ choi_forward(m).mat @ side
    return ProcessOperator(mat, ProcessKind.QF, (m.num_outcomes, m.dim), tol=rho.tol)


def _reverse_register_weights(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance) -> np.ndarray:
    if gamma.dim != m.dim:
        raise DimensionMismatch(f"Prior of dimension {gamma.dim} with POVM of dimension {m.dim}")
    p = measure(rho, m).probs
    return retrodiction_weights(p, prior_outcome_weights(m, gamma), tol)


def q_reverse(rho: DensityOperator, m: Povm, gamma: DensityOperator,
              tol: Tolerance = DEFAULT_TOLERANCE) -> ProcessOperator:
    """``Q_R = (sqrt(tau) M(gamma)^-1/2 (x) sqrt(gamma^T)) C_M (same)`` with ``tau = M(rho)``.

    Raises:
        FalsifyingEvidence: If an observed outcome has zero prior probability.
    """
    _check_pair(rho, m)
    weights = _reverse_register_weights(rho, m, gamma, tol)
    side = kron(np.diag(np.sqrt(weights)), psd_sqrt(transpose(gamma.mat), tol))
    mat = side @ choi_forward(m).mat @ side
    return ProcessOperator(mat, ProcessKind.QR, (m.num_outcomes, m.dim), tol=tol)


def tq_forward(rho: DensityOperator, m: Povm) -> ProcessOperator:
    """``tQ_F = sqrt(C_M) (1_B (x) rho^T) sqrt(C_M)``; same spectrum as ``Q_F``."""
    _check_pair(rho, m)
    root = sqrt_choi(m)
    mat = root @ kron(np.eye(m.num_outcomes), transpose(rho.mat)) @ root
    return ProcessOperator(mat, ProcessKind.TQF, (m.num_outcomes, m.dim), tol=rho.tol)


def tq_reverse(rho: DensityOperator, m: Povm, gamma: DensityOperator,
               tol: Tolerance = DEFAULT_TOLERANCE) -> ProcessOperator:
    """``tQ_R = sqrt(C_M) (M(gamma)^-1/2 tau M(gamma)^-1/2 (x) gamma^T) sqrt(C_M)`` with ``tau = M(rho)``."""
    _check_pair(rho, m)
    weights = _reverse_register_weights(rho, m, gamma, tol)
    root = sqrt_choi(m)
    mat = root @ kron(np.diag(weights), transpose(gamma.mat)) @ root
    return ProcessOperator(mat, ProcessKind.TQR, (m.num_outcomes, m.dim), tol=tol)


def diagonal_decomposition(rho: DensityOperator) -> Tuple[OutcomeDistribution, np.ndarray]:
    """Eigenvalues of ``rho`` as a distribution over ``x`` and the eigenvector matrix."""
    eig = eig_hermitian(rho.mat, rho.tol)
    values = np.clip(eig.eigenvalues, 0.0, None)
    return OutcomeDistribution(values / values.sum()), eig.eigenvectors


def preparation_likelihoods(eigvecs, m: Povm) -> np.ndarray:
    """``L[x, y] = <psi_x| Pi_y |psi_x>`` for the columns ``psi_x`` of ``eigvecs``."""
    v = as_matrix(eigvecs)
    if v.shape[0] != m.dim:
        raise DimensionMismatch(f"Basis of dimension {v.shape[0]} with POVM of dimension {m.dim}")
    likelihoods = np.einsum("ix,yij,jx->xy", v.conj(), m.stacked(), v).real
    return np.clip(likelihoods, 0.0, None)


def _as_probs(p) -> np.ndarray:
    return np.asarray(getattr(p, "probs", p), dtype=float).ravel()


def classical_forward(lambdas, eigvecs, m: Povm) -> JointTable:
    """Prepare-and-measure table ``P_F(x, y) = lambda_x <psi_x|Pi_y|psi_x>``."""
    weights = _as_probs(lambdas)
    likelihoods = preparation_likelihoods(eigvecs, m)
    if weights.shape[0] != likelihoods.shape[0]:
        raise DimensionMismatch(f"{weights.shape[0]} weights for {likelihoods.shape[0]} preparations")
    return JointTable(weights[:, None] * likelihoods)


def classical_reverse(prior, eigvecs, m: Povm, q, tol: Tolerance = DEFAULT_TOLERANCE) -> JointTable:
    """Jeffrey-update reverse table ``P_R(x, y) = q_y gamma_x L[x,y] / sum_x' gamma_x' L[x',y]``.

    Raises:
        FalsifyingEvidence: If evidence ``q`` weights an outcome the prior rules out.
    """
    prior_x = _as_probs(prior)
    evidence = _as_probs(q)
    likelihoods = preparation_likelihoods(eigvecs, m)
    if prior_x.shape[0] != likelihoods.shape[0] or evidence.shape[0] != likelihoods.shape[1]:
        raise DimensionMismatch(
            f"Prior of length {prior_x.shape[0]} and evidence of length {evidence.shape[0]} "
            f"for a {likelihoods.shape[0]} x {likelihoods.shape[1]} likelihood table"
        )
    joint = prior_x[:, None] * likelihoods
    evidence_weights = retrodiction_weights(evidence, joint.sum(axis=0), tol)
    table = joint * evidence_weights[None, :]
    total = float(table.sum())
    if total != 1.0 and abs(total - 1.0) > TABLE_TOL / 10:
        table = table / total
    return JointTable(table)


def petz_recovery_residual(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                           tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``|Petz(M(rho)) - rho|_F``; zero exactly when the measurement is sufficient for the pair."""
    from .qstate import measurement_channel_output
    recovered = petz_map_apply(m, gamma, measurement_channel_output(rho, m), tol)
    return frobenius(recovered.mat - rho.mat)
