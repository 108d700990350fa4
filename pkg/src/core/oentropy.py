"""
Observational entropy with a reference prior, its fully quantum candidates and
the checkers for the relations between them.

Values are extended reals in nats: a finite ``float`` or ``math.inf``.
Differences involving an infinite subtrahend are Indeterminate and are
reported as ``None``.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.special

from .divergence import (INF, belavkin_staszewski, extended_difference,
                         extended_sum, is_finite, kl, umegaki, von_neumann)
from .errors import FalsifyingEvidence, NonCommutingPrior
from .linop import (DEFAULT_TOLERANCE, Tolerance, commutator_norm, is_full_rank,
                    joint_diagonalize, relative_commutator_norm, support_basis,
                    support_leq)
from .qstate import DensityOperator, Povm, measure, post_process
from .retro import (classical_forward, classical_reverse, petz_recovery_residual,
                    q_forward, q_reverse, tq_forward, tq_reverse)

logger = logging.getLogger(__name__)

COMMUTE_TOL = 1e-9
RECOVERY_TOL = 1e-8


class Regime(Enum):
    GENERAL = "general"
    COMMUTING_PRIOR = "commuting-prior"
    FULLY_CLASSICAL = "fully-classical"


@dataclass(frozen=True)
class CommutingFlags:
    """Which of ``[rho, gamma]``, ``[rho, Pi_y]``, ``[gamma, Pi_y]`` vanish (relative Frobenius norm)."""
    rho_gamma: bool
    rho_povm: bool
    gamma_povm: bool

    @property
    def regime(self) -> Regime:
        if self.rho_gamma and self.rho_povm and self.gamma_povm:
            return Regime.FULLY_CLASSICAL
        if self.rho_gamma:
            return Regime.COMMUTING_PRIOR
        return Regime.GENERAL

    def to_dict(self) -> dict:
        return {"rho_gamma": self.rho_gamma, "rho_povm": self.rho_povm, "gamma_povm": self.gamma_povm}


def commuting_flags(rho: DensityOperator, m: Povm, gamma: DensityOperator) -> CommutingFlags:
    def commutes(a, b) -> bool:
        return relative_commutator_norm(a, b) <= COMMUTE_TOL

    return CommutingFlags(
        rho_gamma=commutes(rho.mat, gamma.mat),
        rho_povm=all(commutes(rho.mat, e) for e in m.effects),
        gamma_povm=all(commutes(gamma.mat, e) for e in m.effects),
    )


def _require_commuting(rho: DensityOperator, gamma: DensityOperator) -> None:
    residual = relative_commutator_norm(rho.mat, gamma.mat)
    if residual > COMMUTE_TOL:
        raise NonCommutingPrior(f"State and prior do not commute (relative commutator norm {residual:.3e})")


def _deficiency(d_in: float, d_out: float, what: str) -> float:
    """``d_in - d_out`` for a loss of distinguishability, which is +inf on any support violation."""
    difference = extended_difference(d_in, d_out)
    if difference is not None:
        return difference
    if math.isfinite(d_in):
        logger.warning(f"{what}: finite input divergence but infinite output divergence; reporting inf")
    return INF


def observed_divergence(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                        tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``D(M(rho) || M(gamma))``, the divergence of the outcome statistics."""
    return kl(measure(rho, m), measure(gamma, m), tol)


def cross_entropy(rho: DensityOperator, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``-Tr[rho ln gamma]``; infinite unless ``supp(rho)`` lies in ``supp(gamma)``."""
    if not support_leq(rho.mat, gamma.mat, tol):
        return INF
    values, vectors = support_basis(gamma.mat, tol)
    weights = np.einsum("ik,ij,jk->k", vectors.conj(), rho.mat, vectors).real
    return float(-np.sum(weights * np.log(values)))


def original_oe(rho: DensityOperator, m: Povm) -> float:
    """``S_M(rho) = -sum_y p_y ln(p_y / V_y)`` with ``V_y = Tr[Pi_y]``."""
    p = measure(rho, m).probs
    return float(-np.sum(scipy.special.rel_entr(p, m.volumes())))


def sigma_original(rho: DensityOperator, m: Povm) -> float:
    """``S_M(rho) - S(rho)``, the excess over the von Neumann entropy."""
    return original_oe(rho, m) - von_neumann(rho.mat, rho.tol)


def clax_oe(rho: DensityOperator, m: Povm, gamma: DensityOperator,
            tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Observational entropy for a prior commuting with the state.

    ``-Tr[rho ln gamma] - D(M(rho) || M(gamma))``.

    Raises:
        NonCommutingPrior: If ``[rho, gamma]`` does not vanish.
    """
    _require_commuting(rho, gamma)
    cross = cross_entropy(rho, gamma, tol)
    if math.isinf(cross):
        return INF
    return _deficiency(cross, observed_divergence(rho, m, gamma, tol), "clax_oe")


def sigma1(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Statistical deficiency ``D(rho || gamma) - D(M(rho) || M(gamma))`` (Umegaki)."""
    d_in = umegaki(rho.mat, gamma.mat, tol)
    return _deficiency(d_in, observed_divergence(rho, m, gamma, tol), "sigma1")


def s1(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    return extended_sum(von_neumann(rho.mat, tol), sigma1(rho, m, gamma, tol))


def sigma2(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Irretrodictability ``D(Q_F || Q_R)`` between the forward and reverse process operators.

    Raises:
        FalsifyingEvidence: If an observed outcome has zero prior probability.
    """
    forward = q_forward(rho, m)
    reverse = q_reverse(rho, m, gamma, tol)
    return umegaki(forward.mat, reverse.mat, tol)


def s2(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    return extended_sum(von_neumann(rho.mat, tol), sigma2(rho, m, gamma, tol))


def sigma3(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``D_BS(rho || gamma) - D(M(rho) || M(gamma))``."""
    d_in = belavkin_staszewski(rho.mat, gamma.mat, tol)
    return _deficiency(d_in, observed_divergence(rho, m, gamma, tol), "sigma3")


def s3(rho: DensityOperator, m: Povm, gamma: DensityOperator, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    return extended_sum(von_neumann(rho.mat, tol), sigma3(rho, m, gamma, tol))


def s3_via_process(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                   tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``S(rho) + D_BS(tQ_F || tQ_R)``; agrees with :func:`s3` whenever the supports nest."""
    forward = tq_forward(rho, m)
    reverse = tq_reverse(rho, m, gamma, tol)
    return extended_sum(von_neumann(rho.mat, tol), belavkin_staszewski(forward.mat, reverse.mat, tol))


def _common_basis_weights(rho: DensityOperator, gamma: DensityOperator, tol: Tolerance):
    basis = joint_diagonalize(rho.mat, gamma.mat, tol)

    def diagonal(a: np.ndarray) -> np.ndarray:
        values = np.clip(np.einsum("ix,ij,jx->x", basis.conj(), a, basis).real, 0.0, None)
        return values / values.sum()

    return diagonal(rho.mat), diagonal(gamma.mat), basis


def classical_process_divergence(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                                 tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``D(P_F || P_R)`` for the prepare-and-measure tables in a common eigenbasis of ``rho`` and ``gamma``."""
    _require_commuting(rho, gamma)
    lambdas, prior, basis = _common_basis_weights(rho, gamma, tol)
    forward = classical_forward(lambdas, basis, m)
    try:
        reverse = classical_reverse(prior, basis, m, measure(rho, m), tol)
    except FalsifyingEvidence:
        return INF
    return kl(forward.flat(), reverse.flat(), tol)


def classical_sigma_identity_check(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                                   tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``|D(P_F || P_R) - (D(rho || gamma) - D(M(rho) || M(gamma)))|`` for a commuting prior.

    Both sides infinite counts as agreement (residual 0); exactly one side
    infinite gives an infinite residual.

    Raises:
        NonCommutingPrior: If ``[rho, gamma]`` does not vanish.
    """
    lhs = classical_process_divergence(rho, m, gamma, tol)
    rhs = sigma1(rho, m, gamma, tol)
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    if math.isinf(lhs) or math.isinf(rhs):
        logger.warning(f"Classical bridge: process divergence {lhs} against deficiency {rhs}")
        return INF
    return abs(lhs - rhs)


@dataclass(frozen=True)
class PetzCriterionReport:
    recovered: bool
    residual: float
    sigma1: float
    sigma2: float
    sigma3: float
    commutator_norm: float

    def finite_sigmas(self):
        return [value for value in (self.sigma1, self.sigma2, self.sigma3) if math.isfinite(value)]


def petz_criterion_check(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                         tol: Tolerance = DEFAULT_TOLERANCE) -> PetzCriterionReport:
    """Whether the Petz map of ``(M, gamma)`` recovers ``rho`` from ``M(rho)``.

    Raises:
        FalsifyingEvidence: If an observed outcome has zero prior probability.
    """
    residual = petz_recovery_residual(rho, m, gamma, tol)
    report = PetzCriterionReport(
        recovered=residual <= RECOVERY_TOL,
        residual=residual,
        sigma1=sigma1(rho, m, gamma, tol),
        sigma2=sigma2(rho, m, gamma, tol),
        sigma3=sigma3(rho, m, gamma, tol),
        commutator_norm=commutator_norm(rho.mat, gamma.mat),
    )
    logger.debug(f"Petz criterion: {report}")
    return report


@dataclass(frozen=True)
class MonotonicityReport:
    """Entropy changes under a coarse-graining of the measurement.

    ``delta2`` is diagnostic only; ``None`` marks an Indeterminate or
    unavailable difference.
    """
    delta1: Optional[float]
    delta3: Optional[float]
    delta2: Optional[float] = None

    def violations(self, tolerance: float = 1e-9) -> list:
        return [name for name in ("delta1", "delta3")
                if getattr(self, name) is not None and getattr(self, name) < -tolerance]


def monotonicity_check(rho: DensityOperator, m: Povm, gamma: DensityOperator, w,
                       tol: Tolerance = DEFAULT_TOLERANCE) -> MonotonicityReport:
    coarse = post_process(m, w)
    delta1 = extended_difference(s1(rho, coarse, gamma, tol), s1(rho, m, gamma, tol))
    delta3 = extended_difference(s3(rho, coarse, gamma, tol), s3(rho, m, gamma, tol))
    try:
        delta2 = extended_difference(s2(rho, coarse, gamma, tol), s2(rho, m, gamma, tol))
    except FalsifyingEvidence:
        delta2 = None
    if delta2 is not None and delta2 < -1e-9:
        logger.info(f"S2 decreased under post-processing by {-delta2:.3e}")
    return MonotonicityReport(delta1=delta1, delta3=delta3, delta2=delta2)


@dataclass(frozen=True)
class OrderingReport:
    gap12: Optional[float]
    gap13: Optional[float]


def ordering_check(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                   tol: Tolerance = DEFAULT_TOLERANCE) -> OrderingReport:
    """``S2 - S1`` and ``S3 - S1`` with ``inf - finite = inf``."""
    first = s1(rho, m, gamma, tol)
    return OrderingReport(
        gap12=extended_difference(s2(rho, m, gamma, tol), first),
        gap13=extended_difference(s3(rho, m, gamma, tol), first),
    )


@dataclass(frozen=True)
class EntropyReport:
    """Every entropy of one ``(rho, M, gamma)`` triple, in nats."""
    dims: tuple
    s_vn: float
    s_original: float
    sigma_original: float
    s_clax: Optional[float]
    s1: float
    s2: float
    s3: float
    sigma1: float
    sigma2: float
    sigma3: float
    commuting_flags: CommutingFlags
    s3_identity_residual: Optional[float] = None
    petz_residual: Optional[float] = None

    @property
    def regime(self) -> Regime:
        return self.commuting_flags.regime


def build_entropy_report(rho: DensityOperator, m: Povm, gamma: DensityOperator,
                         tol: Tolerance = DEFAULT_TOLERANCE) -> EntropyReport:
    """Compute all quantities of an :class:`EntropyReport`.

    Raises:
        FalsifyingEvidence: If an observed outcome has zero prior probability.
    """
    flags = commuting_flags(rho, m, gamma)
    s_vn = von_neumann(rho.mat, tol)
    s_original = original_oe(rho, m)
    values = {
        "sigma1": sigma1(rho, m, gamma, tol),
        "sigma2": sigma2(rho, m, gamma, tol),
        "sigma3": sigma3(rho, m, gamma, tol),
    }
    s3_value = extended_sum(s_vn, values["sigma3"])

    identity_residual = None
    if is_full_rank(tq_reverse(rho, m, gamma, tol).mat, tol):
        via_process = s3_via_process(rho, m, gamma, tol)
        if is_finite(via_process) and is_finite(s3_value):
            identity_residual = abs(via_process - s3_value)

    try:
        petz_residual = petz_recovery_residual(rho, m, gamma, tol)
    except FalsifyingEvidence:
        petz_residual = None

    return EntropyReport(
        dims=(rho.dim, m.num_outcomes),
        s_vn=s_vn,
        s_original=s_original,
        sigma_original=s_original - s_vn,
        s_clax=clax_oe(rho, m, gamma, tol) if flags.rho_gamma else None,
        s1=extended_sum(s_vn, values["sigma1"]),
        s2=extended_sum(s_vn, values["sigma2"]),
        s3=s3_value,
        commuting_flags=flags,
        s3_identity_residual=identity_residual,
        petz_residual=petz_residual,
        **values,
    )
