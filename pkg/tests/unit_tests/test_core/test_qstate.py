"""
Unit tests for states, POVMs and the measurement channel.
"""
import math

import numpy as np
import pytest

from src.core.errors import DimensionMismatch, NonPositiveBeta, ValidationError
from src.core.qstate import (DensityOperator, OutcomeDistribution, Povm, StochasticMatrix,
                             diagonal_povm, gibbs_prior, measure, measurement_channel_output,
                             post_process)


class TestDensityOperator:
    def test_maximally_mixed(self):
        rho = DensityOperator.maximally_mixed(3)
        assert rho.dim == 3
        assert np.allclose(rho.eigenvalues(), [1 / 3] * 3)
        assert rho.is_full_rank()

    def test_pure_state_is_normalized(self):
        rho = DensityOperator.pure([3.0, 4.0])
        assert np.allclose(rho.mat, np.array([[9, 12], [12, 16]]) / 25)
        assert not rho.is_full_rank()

    def test_matrix_is_read_only(self):
        rho = DensityOperator.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.mat[0, 0] = 1.0

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValidationError) as exc_info:
            DensityOperator(np.diag([0.5, 0.6]))
        assert exc_info.value.invariant == "density operator unit trace"
        assert exc_info.value.residual == pytest.approx(0.1)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError) as exc_info:
            DensityOperator(np.diag([1.2, -0.2]))
        assert "positivity" in exc_info.value.invariant
        assert exc_info.value.residual == pytest.approx(0.2)

    def test_from_spectrum_with_basis(self, rng):
        from scipy.stats import unitary_group
        u = unitary_group.rvs(3, random_state=rng)
        rho = DensityOperator.from_spectrum([0.5, 0.3, 0.2], u)
        assert np.allclose(rho.eigenvalues(), [0.5, 0.3, 0.2])

    def test_from_spectrum_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            DensityOperator.from_spectrum([0.5, 0.5], np.eye(3))


class TestPovm:
    def test_computational(self):
        povm = Povm.computational(3)
        assert povm.dim == 3
        assert povm.num_outcomes == 3
        assert np.allclose(povm.volumes(), [1.0, 1.0, 1.0])

    def test_trivial(self):
        povm = Povm.trivial(4)
        assert povm.num_outcomes == 1
        assert np.allclose(povm.volumes(), [4.0])

    def test_from_blocks(self):
        povm = Povm.from_blocks([[0, 2], [1]])
        assert np.allclose(povm.effects[0], np.diag([1.0, 0.0, 1.0]))
        assert np.allclose(povm.volumes(), [2.0, 1.0])

    def test_closure_violation_names_residual(self):
        with pytest.raises(ValidationError) as exc_info:
            Povm((np.array([[0.9]]),))
        assert exc_info.value.invariant == "povm closure"
        assert exc_info.value.residual == pytest.approx(0.1)

    def test_rejects_mixed_shapes(self):
        with pytest.raises(DimensionMismatch):
            Povm((np.eye(2), np.zeros((3, 3))))

    def test_rejects_negative_effect(self):
        with pytest.raises(ValidationError):
            Povm((np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))


class TestDistributions:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError):
            OutcomeDistribution([0.5, 0.6])

    def test_stochastic_matrix_columns(self):
        with pytest.raises(ValidationError):
            StochasticMatrix([[0.5, 1.0], [0.4, 0.0]])
        assert StochasticMatrix.merge_all(3).shape == (1, 3)
        assert StochasticMatrix.identity(2).shape == (2, 2)


class TestMeasurement:
    def test_measure_plus_state(self):
        probs = measure(DensityOperator.pure([1.0, 1.0]), Povm.computational(2)).probs
        assert np.allclose(probs, [0.5, 0.5])

    def test_measure_renormalizes_within_closure_tolerance(self):
        povm = Povm((np.diag([1 + 5e-10, 0.0]), np.diag([0.0, 1.0])))
        p = measure(DensityOperator.pure([1, 0]), povm)
        assert p.probs.sum() == pytest.approx(1.0, abs=1e-15)
        assert p.probs[0] == pytest.approx(1.0, abs=1e-15)

    def test_measure_at_closure_limit(self):
        povm = Povm((np.diag([1 + 9e-10, 0.0]), np.diag([0.0, 1.0])))
        for rho in (DensityOperator.pure([1, 0]), DensityOperator.maximally_mixed(2)):
            assert measure(rho, povm).probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_measure_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            measure(DensityOperator.maximally_mixed(2), Povm.computational(3))

    def test_channel_output_is_diagonal(self, rng):
        rho = DensityOperator.pure(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        out = measurement_channel_output(rho, Povm.computational(3))
        assert out.dim == 3
        assert np.allclose(out.mat, np.diag(np.diag(out.mat)))
        assert np.allclose(np.diag(out.mat).real, np.abs(np.diag(rho.mat)))

    def test_post_process_merge_all_is_trivial(self):
        coarse = post_process(Povm.computational(3), StochasticMatrix.merge_all(3))
        assert coarse.num_outcomes == 1
        assert np.allclose(coarse.effects[0], np.eye(3))

    def test_post_process_statistics(self):
        rho = DensityOperator.from_spectrum([0.6, 0.3, 0.1])
        w = np.array([[1.0, 0.5, 0.0], [0.0, 0.5, 1.0]])
        coarse = measure(rho, post_process(Povm.computational(3), w)).probs
        assert np.allclose(coarse, [0.75, 0.25])

    def test_post_process_wrong_columns(self):
        with pytest.raises(DimensionMismatch):
            post_process(Povm.computational(3), np.ones((1, 2)))

    def test_diagonal_povm_pinches(self):
        plus = np.array([1.0, 1.0]) / math.sqrt(2)
        minus = np.array([1.0, -1.0]) / math.sqrt(2)
        pinched = diagonal_povm(Povm.projective([plus, minus]), np.eye(2))
        assert np.allclose(pinched.effects[0], np.eye(2) / 2)
        assert np.allclose(pinched.effects[1], np.eye(2) / 2)


class TestGibbsPrior:
    def test_two_level(self):
        gamma = gibbs_prior([0.0, 1.0], beta=1.0)
        z = 1.0 + math.exp(-1.0)
        assert np.allclose(np.diag(gamma.mat).real, [1.0 / z, math.exp(-1.0) / z])

    def test_large_energies_do_not_overflow(self):
        gamma = gibbs_prior([1000.0, 1001.0], beta=1.0)
        assert np.isfinite(gamma.mat).all()

    @pytest.mark.parametrize("beta", [0.0, -1.0, float("inf"), float("nan")])
    def test_rejects_non_positive_beta(self, beta):
        with pytest.raises(NonPositiveBeta):
            gibbs_prior([0.0, 1.0], beta)
