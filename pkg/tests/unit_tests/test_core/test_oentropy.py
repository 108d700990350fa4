"""
Unit tests for observational entropies and their checkers.
"""
import logging
import math

import numpy as np
import pytest

from src.core.divergence import INF
from src.core.errors import NonCommutingPrior
from src.core.oentropy import (MonotonicityReport, Regime, build_entropy_report, clax_oe,
                               classical_sigma_identity_check, commuting_flags, cross_entropy,
                               monotonicity_check, observed_divergence, ordering_check,
                               original_oe, petz_criterion_check, s1, s2, s3, s3_via_process,
                               sigma1, sigma2, sigma3, sigma_original)
from src.core.qstate import DensityOperator, Povm, StochasticMatrix, post_process
from src.scenarios.random_instances import random_full_rank_state, random_povm, random_stochastic


class TestOriginal:
    def test_computational_measurement_of_plus(self):
        rho = DensityOperator.pure([1.0, 1.0])
        assert original_oe(rho, Povm.computational(2)) == pytest.approx(math.log(2))
        assert sigma_original(rho, Povm.computational(2)) == pytest.approx(math.log(2))

    def test_trivial_measurement_gives_log_dimension(self):
        rho = DensityOperator.pure([1.0, 0.0, 0.0])
        assert original_oe(rho, Povm.trivial(3)) == pytest.approx(math.log(3))


class TestCommutingFlags:
    def test_all_commuting(self, uniform_scenario):
        s = uniform_scenario
        flags = commuting_flags(s.rho, s.povm, s.gamma)
        assert flags.rho_gamma and flags.rho_povm and flags.gamma_povm
        assert flags.regime is Regime.FULLY_CLASSICAL

    def test_general(self, qubit_scenario):
        s = qubit_scenario
        flags = commuting_flags(s.rho, s.povm, s.gamma)
        assert not flags.rho_gamma
        assert flags.gamma_povm
        assert flags.regime is Regime.GENERAL
        assert flags.to_dict() == {"rho_gamma": False, "rho_povm": False, "gamma_povm": True}


class TestCandidates:
    def test_qubit_values(self, qubit_scenario):
        s = qubit_scenario
        gamma_diag = np.diag(s.gamma.mat).real
        observed = 0.5 * math.log(0.5 / gamma_diag[0]) + 0.5 * math.log(0.5 / gamma_diag[1])
        assert observed_divergence(s.rho, s.povm, s.gamma) == pytest.approx(observed)
        cross = -0.5 * math.log(gamma_diag[0]) - 0.5 * math.log(gamma_diag[1])
        assert cross_entropy(s.rho, s.gamma) == pytest.approx(cross)
        assert s1(s.rho, s.povm, s.gamma) == pytest.approx(math.log(2))
        bs = math.log(0.5 / gamma_diag[0] + 0.5 / gamma_diag[1])
        assert s3(s.rho, s.povm, s.gamma) == pytest.approx(bs - observed)

    def test_pure_state_projective_measurement_has_infinite_s2(self, qubit_scenario):
        s = qubit_scenario
        assert s2(s.rho, s.povm, s.gamma) == INF
        assert sigma2(s.rho, s.povm, s.gamma) == INF

    def test_uniform_prior_reduces_to_original(self, rng):
        rho = random_full_rank_state(3, rng)
        povm = random_povm(3, 2, rng)
        u = DensityOperator.maximally_mixed(3)
        assert s1(rho, povm, u) == pytest.approx(original_oe(rho, povm), abs=1e-9)
        assert s3(rho, povm, u) == pytest.approx(original_oe(rho, povm), abs=1e-9)

    def test_sigmas_nonnegative(self, rng):
        rho = random_full_rank_state(3, rng)
        povm = random_povm(3, 3, rng)
        gamma = random_full_rank_state(3, rng)
        for sigma in (sigma1, sigma2, sigma3):
            assert sigma(rho, povm, gamma) >= -1e-9

    def test_s3_identity(self, rng):
        rho = random_full_rank_state(3, rng)
        povm = random_povm(3, 2, rng)
        gamma = random_full_rank_state(3, rng)
        assert s3_via_process(rho, povm, gamma) == pytest.approx(s3(rho, povm, gamma), abs=1e-8)

    def test_infinite_deficiency_when_support_escapes(self):
        rho = DensityOperator.maximally_mixed(2)
        gamma = DensityOperator.from_spectrum([1.0, 0.0])
        # trivial measurement: observed divergence stays finite
        assert sigma1(rho, Povm.trivial(2), gamma) == INF
        assert sigma3(rho, Povm.trivial(2), gamma) == INF

    def test_indeterminate_deficiency_is_infinite_without_warning(self, caplog):
        rho = DensityOperator.maximally_mixed(2)
        gamma = DensityOperator.from_spectrum([1.0, 0.0])
        with caplog.at_level(logging.WARNING):
            assert sigma1(rho, Povm.computational(2), gamma) == INF
        assert not any("finite input divergence" in r.message for r in caplog.records)


class TestClax:
    def test_requires_commuting_prior(self, qubit_scenario):
        s = qubit_scenario
        with pytest.raises(NonCommutingPrior):
            clax_oe(s.rho, s.povm, s.gamma)

    def test_matches_s1_for_commuting_prior(self):
        rho = DensityOperator.from_spectrum([0.6, 0.3, 0.1])
        gamma = DensityOperator.from_spectrum([0.2, 0.5, 0.3])
        povm = Povm.from_blocks([[0, 1], [2]])
        assert clax_oe(rho, povm, gamma) == pytest.approx(s1(rho, povm, gamma), abs=1e-12)

    def test_classical_bridge(self):
        rho = DensityOperator.from_spectrum([0.6, 0.3, 0.1])
        gamma = DensityOperator.from_spectrum([0.2, 0.5, 0.3])
        plus = np.array([1.0, 1.0, 0.0]) / math.sqrt(2)
        minus = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
        povm = Povm.projective([plus, minus, [0.0, 0.0, 1.0]])
        assert classical_sigma_identity_check(rho, povm, gamma) <= 1e-9


class TestChecks:
    def test_ordering(self, rng):
        rho = random_full_rank_state(3, rng)
        povm = random_povm(3, 2, rng)
        gamma = random_full_rank_state(3, rng)
        report = ordering_check(rho, povm, gamma)
        assert report.gap12 is None or report.gap12 >= -1e-9
        assert report.gap13 >= -1e-9

    def test_monotonicity_under_merge(self, rng):
        rho = random_full_rank_state(3, rng)
        povm = random_povm(3, 3, rng)
        gamma = random_full_rank_state(3, rng)
        report = monotonicity_check(rho, povm, gamma, StochasticMatrix.merge_all(3))
        assert report.violations() == []
        assert report.delta1 >= -1e-9
        # one outcome left: S(rho) + D(rho||gamma) = -Tr[rho ln gamma]
        merged = post_process(povm, StochasticMatrix.merge_all(3))
        assert s1(rho, merged, gamma) == pytest.approx(cross_entropy(rho, gamma), abs=1e-9)

    def test_monotonicity_random_coarse_graining(self, rng):
        rho = random_full_rank_state(4, rng)
        povm = random_povm(4, 4, rng)
        gamma = random_full_rank_state(4, rng)
        report = monotonicity_check(rho, povm, gamma, random_stochastic(2, 4, rng))
        assert report.violations() == []

    def test_report_violations(self):
        report = MonotonicityReport(delta1=-1e-3, delta3=None, delta2=-1.0)
        assert report.violations() == ["delta1"]

    def test_petz_criterion_prior_is_recovered(self, rng):
        gamma = random_full_rank_state(3, rng)
        povm = random_povm(3, 2, rng)
        report = petz_criterion_check(gamma, povm, gamma)
        assert report.recovered
        assert max(report.finite_sigmas()) <= 1e-7
        assert report.commutator_norm <= 1e-7

    def test_petz_criterion_not_recovered(self, qubit_scenario):
        s = qubit_scenario
        report = petz_criterion_check(s.rho, s.povm, s.gamma)
        assert not report.recovered
        assert report.sigma1 > 0


class TestEntropyReport:
    def test_fields(self, qubit_scenario):
        s = qubit_scenario
        report = build_entropy_report(s.rho, s.povm, s.gamma)
        assert report.dims == (2, 2)
        assert report.s_vn == pytest.approx(0.0, abs=1e-12)
        assert report.s_original == pytest.approx(math.log(2))
        assert report.s_clax is None
        assert report.s2 == INF
        assert report.sigma1 == pytest.approx(report.s1 - report.s_vn)
        assert report.regime is Regime.GENERAL
        assert report.petz_residual > 0

    def test_commuting_report_has_clax(self, uniform_scenario):
        s = uniform_scenario
        report = build_entropy_report(s.rho, s.povm, s.gamma)
        assert report.s_clax == pytest.approx(math.log(2))
        assert report.s1 == pytest.approx(math.log(2))
        assert report.s2 == pytest.approx(math.log(2))
        assert report.s3 == pytest.approx(math.log(2))
        assert report.regime is Regime.FULLY_CLASSICAL
        # rank-one effects leave tQ_R singular
        assert report.s3_identity_residual is None
