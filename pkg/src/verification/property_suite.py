"""
Numerical properties checked on every random trial.

Each property maps a scenario (plus a generator for any auxiliary draws) to a
residual: ``None`` when the property does not apply to the instance, else a
nonnegative float compared against the property's threshold. Boolean
properties report ``0.0`` or ``inf``.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Optional

import numpy as np

from src.core import divergence, linop, oentropy, qstate, retro
from src.core.errors import FalsifyingEvidence
from src.core.qstate import DensityOperator, Povm
from src.scenarios.example_generators import petz_recovered_instance
from src.scenarios.random_instances import (REGIMES, block_instance, random_stochastic,
                                            random_unitary)
from src.scenarios.scenario import Scenario

logger = logging.getLogger(__name__)

ALL_REGIMES = frozenset(REGIMES)
COMMUTING_REGIMES = frozenset({"commuting", "fully-classical"})

Residual = Optional[float]
CheckFunction = Callable[[Scenario, np.random.Generator, int], Residual]


@dataclass(frozen=True)
class NumericalProperty:
    """A named check with its pass threshold.

    Attributes:
        name: Identifier used in summaries.
        check: ``check(scenario, rng, postprocessings) -> residual``.
        threshold: Largest residual that passes.
        regimes: Regimes the property runs on.
        contracted: Whether a failure makes the sweep fail; non-contracted
            properties are diagnostics whose failures are only counted.
    """
    name: str
    check: CheckFunction
    threshold: float
    regimes: FrozenSet[str] = ALL_REGIMES
    contracted: bool = True


def _shortfall(values) -> Residual:
    """``max(0, -min(values))`` over the determinate values, ``None`` if there are none."""
    kept = [v for v in values if v is not None and math.isfinite(v)]
    if not kept:
        return None
    return max(0.0, -min(kept))


def _both_finite_gap(a: float, b: float) -> Residual:
    if not (math.isfinite(a) and math.isfinite(b)):
        return None
    return abs(a - b)


def _uniform(d: int) -> DensityOperator:
    return DensityOperator.maximally_mixed(d)


# linop / qstate / divergence


def eig_reconstruction(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    d = s.rho.dim
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    residuals = []
    for mat in (s.rho.mat, a + a.conj().T):
        eig = linop.eig_hermitian(mat, s.tol)
        residual = linop.frobenius(eig.reconstruct() - mat) / max(1.0, linop.frobenius(mat))
        unitarity = linop.frobenius(eig.eigenvectors.conj().T @ eig.eigenvectors - np.eye(d))
        residuals.append(max(residual, unitarity))
    return max(residuals)


def support_projector_idempotent(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    p = linop.support_projector(s.rho.mat, s.tol)
    return linop.frobenius(p @ p - p)


def partial_trace_preserves_trace(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    q = retro.q_forward(s.rho, s.povm)
    total = np.trace(q.mat)
    return max(abs(np.trace(q.output_marginal()) - total), abs(np.trace(q.input_marginal()) - total))


def post_processing_statistics(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    m = s.povm.num_outcomes
    w = random_stochastic(int(rng.integers(1, m + 1)), m, rng)
    coarse = qstate.measure(s.rho, qstate.post_process(s.povm, w)).probs
    return float(np.max(np.abs(coarse - w.w @ qstate.measure(s.rho, s.povm).probs)))


def measurement_channel_linearity(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    weight = float(rng.uniform())
    mixture = DensityOperator(weight * s.rho.mat + (1 - weight) * s.gamma.mat)
    lhs = qstate.measurement_channel_output(mixture, s.povm).mat
    rhs = (weight * qstate.measurement_channel_output(s.rho, s.povm).mat
           + (1 - weight) * qstate.measurement_channel_output(s.gamma, s.povm).mat)
    return float(np.max(np.abs(lhs - rhs)))


def divergence_nonnegativity(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return _shortfall([
        divergence.umegaki(s.rho.mat, s.gamma.mat, s.tol),
        divergence.belavkin_staszewski(s.rho.mat, s.gamma.mat, s.tol),
        oentropy.observed_divergence(s.rho, s.povm, s.gamma, s.tol),
    ])


def data_processing(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    d_in = divergence.umegaki(s.rho.mat, s.gamma.mat, s.tol)
    d_out = oentropy.observed_divergence(s.rho, s.povm, s.gamma, s.tol)
    return _shortfall([divergence.extended_difference(d_in, d_out)])


def bs_above_umegaki(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    bs = divergence.belavkin_staszewski(s.rho.mat, s.gamma.mat, s.tol)
    um = divergence.umegaki(s.rho.mat, s.gamma.mat, s.tol)
    if not (math.isfinite(bs) and math.isfinite(um)):
        return None
    return max(0.0, um - bs)


def commuting_divergence_equivalence(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    basis = linop.joint_diagonalize(s.rho.mat, s.gamma.mat, s.tol)
    spectrum = lambda a: np.clip(np.einsum("ix,ij,jx->x", basis.conj(), a, basis).real, 0.0, None)
    um = divergence.umegaki(s.rho.mat, s.gamma.mat, s.tol)
    bs = divergence.belavkin_staszewski(s.rho.mat, s.gamma.mat, s.tol)
    classical = divergence.kl(spectrum(s.rho.mat), spectrum(s.gamma.mat), s.tol)
    if not all(math.isfinite(v) for v in (um, bs, classical)):
        return 0.0 if all(math.isinf(v) for v in (um, bs, classical)) else math.inf
    return max(abs(um - bs), abs(um - classical))


def finiteness_matches_support(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    contained = linop.support_leq(s.rho.mat, s.gamma.mat, s.tol)
    finite = [math.isfinite(divergence.umegaki(s.rho.mat, s.gamma.mat, s.tol)),
              math.isfinite(divergence.belavkin_staszewski(s.rho.mat, s.gamma.mat, s.tol))]
    return 0.0 if all(f == contained for f in finite) else math.inf


def diagonal_povm_statistics(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    basis = linop.joint_diagonalize(s.rho.mat, s.gamma.mat, s.tol)
    pinched = qstate.diagonal_povm(s.povm, basis)
    return max(
        float(np.max(np.abs(qstate.measure(state, pinched).probs - qstate.measure(state, s.povm).probs)))
        for state in (s.rho, s.gamma)
    )


# retro


def choi_relation(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return retro.choi_relation_residual(s.povm, s.gamma, s.tol)


def q_forward_marginals(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    q = retro.q_forward(s.rho, s.povm)
    return max(
        linop.frobenius(q.output_marginal() - qstate.measurement_channel_output(s.rho, s.povm).mat),
        linop.frobenius(q.input_marginal() - linop.transpose(s.rho.mat)),
    )


def q_reverse_marginals(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    tau = qstate.measurement_channel_output(s.rho, s.povm)
    q = retro.q_reverse(s.rho, s.povm, s.gamma, s.tol)
    recovered = retro.petz_map_apply(s.povm, s.gamma, tau, s.tol)
    return max(
        linop.frobenius(q.output_marginal() - tau.mat),
        linop.frobenius(q.input_marginal() - linop.transpose(recovered.mat)),
    )


def spectrum_equivalence(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    pairs = [
        (retro.q_forward(s.rho, s.povm), retro.tq_forward(s.rho, s.povm)),
        (retro.q_reverse(s.rho, s.povm, s.gamma, s.tol), retro.tq_reverse(s.rho, s.povm, s.gamma, s.tol)),
    ]
    return max(float(np.max(np.abs(a.eigenvalues() - b.eigenvalues()))) for a, b in pairs)


def petz_fixed_point(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    tau = qstate.measurement_channel_output(s.gamma, s.povm)
    return linop.frobenius(retro.petz_map_apply(s.povm, s.gamma, tau, s.tol).mat - s.gamma.mat)


def classical_forward_marginals(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    lambdas, basis = retro.diagonal_decomposition(s.rho)
    table = retro.classical_forward(lambdas, basis, s.povm)
    return max(
        float(np.max(np.abs(table.marginal_x() - lambdas.probs))),
        float(np.max(np.abs(table.marginal_y() - qstate.measure(s.rho, s.povm).probs))),
    )


def tq_forward_input_marginal(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    roots = [linop.psd_sqrt(effect, s.tol) for effect in s.povm.effects]
    expected = linop.transpose(sum(r @ s.rho.mat @ r for r in roots))
    return linop.frobenius(retro.tq_forward(s.rho, s.povm).input_marginal() - expected)


# oentropy


def sigma_lower_bound(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return _shortfall([
        oentropy.sigma1(s.rho, s.povm, s.gamma, s.tol),
        oentropy.sigma2(s.rho, s.povm, s.gamma, s.tol),
        oentropy.sigma3(s.rho, s.povm, s.gamma, s.tol),
    ])


def uniform_prior_reduction(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    u = _uniform(s.rho.dim)
    original = oentropy.original_oe(s.rho, s.povm)
    gaps = [abs(oentropy.s1(s.rho, s.povm, u, s.tol) - original),
            abs(oentropy.s3(s.rho, s.povm, u, s.tol) - original)]
    if oentropy.commuting_flags(s.rho, s.povm, u).rho_povm:
        gaps.append(abs(oentropy.s2(s.rho, s.povm, u, s.tol) - original))
    return max(gaps)


def uniform_deficiency_identity(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    u = _uniform(s.rho.dim)
    return abs(oentropy.sigma_original(s.rho, s.povm) - oentropy.sigma1(s.rho, s.povm, u, s.tol))


def original_upper_bound(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return max(0.0, oentropy.original_oe(s.rho, s.povm) - math.log(s.rho.dim))


def commuting_reduction(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    clax = oentropy.clax_oe(s.rho, s.povm, s.gamma, s.tol)
    candidates = [oentropy.s1(s.rho, s.povm, s.gamma, s.tol), oentropy.s3(s.rho, s.povm, s.gamma, s.tol)]
    if oentropy.commuting_flags(s.rho, s.povm, s.gamma).regime is oentropy.Regime.FULLY_CLASSICAL:
        candidates.append(oentropy.s2(s.rho, s.povm, s.gamma, s.tol))
    gaps = [_both_finite_gap(value, clax) for value in candidates]
    if any(g is None for g in gaps):
        return 0.0 if all(math.isinf(v) for v in candidates + [clax]) else math.inf
    return max(gaps)


def block_prior_reduction(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    d, m = s.dims
    if m > d:
        return None
    block = block_instance(d, m, rng)
    return abs(oentropy.clax_oe(block.rho, block.povm, block.gamma, block.tol)
               - oentropy.original_oe(block.rho, block.povm))


def process_identity(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    reverse = retro.tq_reverse(s.rho, s.povm, s.gamma, s.tol)
    values = reverse.eigenvalues()
    if values[-1] <= linop.spectral_cut(values, s.tol):
        return None
    return _both_finite_gap(oentropy.s3_via_process(s.rho, s.povm, s.gamma, s.tol),
                            oentropy.s3(s.rho, s.povm, s.gamma, s.tol))


def classical_bridge(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return oentropy.classical_sigma_identity_check(s.rho, s.povm, s.gamma, s.tol)


def classical_bridge_uniform(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    return oentropy.classical_sigma_identity_check(s.rho, s.povm, _uniform(s.rho.dim), s.tol)


def ordering(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    report = oentropy.ordering_check(s.rho, s.povm, s.gamma, s.tol)
    return _shortfall([report.gap12, report.gap13])


def _coarse_grainings(s: Scenario, rng: np.random.Generator, count: int):
    m = s.povm.num_outcomes
    return [random_stochastic(int(rng.integers(1, m + 1)), m, rng) for _ in range(count)]


def monotonicity(s: Scenario, rng: np.random.Generator, postprocessings: int) -> Residual:
    deltas = []
    for w in _coarse_grainings(s, rng, postprocessings):
        report = oentropy.monotonicity_check(s.rho, s.povm, s.gamma, w, s.tol)
        deltas.extend([report.delta1, report.delta3])
    return _shortfall(deltas)


def s2_monotonicity_search(s: Scenario, rng: np.random.Generator, postprocessings: int) -> Residual:
    deltas = []
    for w in _coarse_grainings(s, rng, postprocessings):
        report = oentropy.monotonicity_check(s.rho, s.povm, s.gamma, w, s.tol)
        deltas.append(report.delta2)
    residual = _shortfall(deltas)
    if residual:
        logger.info(f"{s.name}: S2 decreases by {residual:.3e} under a coarse-graining")
    return residual


def decomposition_independence(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    d = s.rho.dim
    if d < 2:
        return None
    _, basis = retro.diagonal_decomposition(s.rho)
    spectrum = np.sort(np.clip(s.rho.eigenvalues(), 0.0, None))[::-1]
    spectrum[1] = spectrum[0]
    spectrum = spectrum / spectrum.sum()
    remixed = basis.copy()
    remixed[:, :2] = basis[:, :2] @ random_unitary(2, rng)
    u = _uniform(d)
    values = []
    for vectors in (basis, remixed):
        state = DensityOperator.from_spectrum(spectrum, vectors)
        lambdas = np.einsum("ix,ij,jx->x", vectors.conj(), state.mat, vectors).real
        forward = retro.classical_forward(lambdas / lambdas.sum(), vectors, s.povm)
        reverse = retro.classical_reverse(np.full(d, 1.0 / d), vectors, s.povm,
                                          qstate.measure(state, s.povm), s.tol)
        values.append((divergence.kl(forward.flat(), reverse.flat(), s.tol),
                       oentropy.s1(state, s.povm, u, s.tol)))
    return max(abs(a - b) for a, b in zip(*values))


def petz_criterion(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    """Recovery implies vanishing excesses and commutation; a vanishing Umegaki excess implies recovery."""
    instances = [s]
    d, m = s.dims
    if m <= d:
        instances.append(petz_recovered_instance(d, m, seed=int(rng.integers(2 ** 31))))
    worst = 0.0
    for instance in instances:
        try:
            report = oentropy.petz_criterion_check(instance.rho, instance.povm, instance.gamma, instance.tol)
        except FalsifyingEvidence:
            continue
        if report.recovered:
            worst = max([worst, report.commutator_norm] + report.finite_sigmas())
        elif math.isfinite(report.sigma1) and report.sigma1 <= 1e-9:
            return math.inf
    return worst


def convex_prior_reduction(s: Scenario, rng: np.random.Generator, _: int) -> Residual:
    d = s.rho.dim
    basis = random_unitary(d, rng)
    povm = Povm.projective(basis.T)
    weights = rng.uniform(0.1, 1.0, size=d)
    gamma = DensityOperator.from_spectrum(weights / weights.sum(), basis)
    mixture = np.zeros((d, d), dtype=complex)
    components = rng.uniform(0.1, 1.0, size=2)
    for weight in components / components.sum():
        psi = basis @ np.exp(1j * rng.uniform(0, 2 * np.pi, size=d)) / np.sqrt(d)
        mixture += weight * np.outer(psi, psi.conj())
    rho = DensityOperator(mixture)
    return abs(oentropy.s1(rho, povm, gamma, s.tol) - oentropy.original_oe(rho, povm))


PROPERTIES: List[NumericalProperty] = [
    NumericalProperty("eig_reconstruction", eig_reconstruction, 1e-10),
    NumericalProperty("support_projector_idempotent", support_projector_idempotent, 1e-9),
    NumericalProperty("partial_trace_preserves_trace", partial_trace_preserves_trace, 1e-12),
    NumericalProperty("post_processing_statistics", post_processing_statistics, 1e-10),
    NumericalProperty("measurement_channel_linearity", measurement_channel_linearity, 1e-10),
    NumericalProperty("divergence_nonnegativity", divergence_nonnegativity, 1e-10),
    NumericalProperty("data_processing", data_processing, 1e-9),
    NumericalProperty("bs_above_umegaki", bs_above_umegaki, 1e-9),
    NumericalProperty("commuting_divergence_equivalence", commuting_divergence_equivalence, 1e-9,
                      regimes=COMMUTING_REGIMES),
    NumericalProperty("finiteness_matches_support", finiteness_matches_support, 0.0),
    NumericalProperty("diagonal_povm_statistics", diagonal_povm_statistics, 1e-10, regimes=COMMUTING_REGIMES),
    NumericalProperty("choi_relation", choi_relation, 1e-9),
    NumericalProperty("q_forward_marginals", q_forward_marginals, 1e-9),
    NumericalProperty("q_reverse_marginals", q_reverse_marginals, 1e-9),
    NumericalProperty("spectrum_equivalence", spectrum_equivalence, 1e-9),
    NumericalProperty("petz_fixed_point", petz_fixed_point, 1e-9),
    NumericalProperty("classical_forward_marginals", classical_forward_marginals, 1e-10),
    NumericalProperty("tq_forward_input_marginal", tq_forward_input_marginal, 1e-9),
    NumericalProperty("sigma_lower_bound", sigma_lower_bound, 1e-9),
    NumericalProperty("uniform_prior_reduction", uniform_prior_reduction, 1e-9),
    NumericalProperty("uniform_deficiency_identity", uniform_deficiency_identity, 1e-9),
    NumericalProperty("original_upper_bound", original_upper_bound, 1e-9),
    NumericalProperty("commuting_reduction", commuting_reduction, 1e-9, regimes=COMMUTING_REGIMES),
    NumericalProperty("block_prior_reduction", block_prior_reduction, 1e-9,
                      regimes=frozenset({"fully-classical"})),
    NumericalProperty("process_identity", process_identity, 1e-8),
    NumericalProperty("classical_bridge", classical_bridge, 1e-9, regimes=COMMUTING_REGIMES),
    NumericalProperty("classical_bridge_uniform", classical_bridge_uniform, 1e-9),
    NumericalProperty("ordering", ordering, 1e-9),
    NumericalProperty("monotonicity", monotonicity, 1e-9),
    NumericalProperty("s2_monotonicity_search", s2_monotonicity_search, 1e-9, contracted=False),
    NumericalProperty("decomposition_independence", decomposition_independence, 1e-9),
    NumericalProperty("petz_criterion", petz_criterion, 1e-7),
    NumericalProperty("convex_prior_reduction", convex_prior_reduction, 1e-9),
]


def properties_for(regime: str) -> List[NumericalProperty]:
    return [p for p in PROPERTIES if regime in p.regimes]
