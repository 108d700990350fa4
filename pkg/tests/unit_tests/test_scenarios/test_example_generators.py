"""
Unit tests for the named example scenarios.
"""
import math

import numpy as np
import pytest

from src.core.errors import InvalidParameters
from src.core.linop import commutator_norm
from src.core.oentropy import Regime, commuting_flags
from src.core.retro import petz_recovery_residual
from src.scenarios.example_generators import (EXAMPLE_KINDS, generate_example, gibbs_example,
                                              petz_recovered_instance, three_qubit_example)

SQRT_HALF = 1 / math.sqrt(2)


class TestGibbsExample:
    def test_two_level_prior(self):
        scenario = gibbs_example(2, 1.0, 1.0)
        z = 1 + math.exp(-1.0)
        assert np.allclose(scenario.gamma.mat, np.diag([1 / z, math.exp(-1.0) / z]))

    def test_state_is_unbiased(self):
        scenario = gibbs_example(4, 1.0)
        assert np.allclose(np.diag(scenario.rho.mat).real, 0.25)
        assert np.allclose(scenario.rho.eigenvalues()[0], 1.0)

    def test_energy_basis_measurement(self):
        scenario = gibbs_example(3, 0.5)
        assert scenario.povm.num_outcomes == 3
        for n, effect in enumerate(scenario.povm.effects):
            expected = np.zeros((3, 3))
            expected[n, n] = 1.0
            assert np.allclose(effect, expected)

    @pytest.mark.parametrize("beta", [0.0, -1.0, float("inf")])
    def test_rejects_bad_beta(self, beta):
        with pytest.raises(InvalidParameters):
            gibbs_example(2, beta)

    def test_rejects_bad_dimension(self):
        with pytest.raises(InvalidParameters):
            gibbs_example(0, 1.0)


class TestThreeQubitExample:
    def test_uniform_prior_at_one_eighth(self):
        scenario = three_qubit_example(SQRT_HALF, SQRT_HALF, 1 / 8, 1 / 8)
        assert np.allclose(scenario.gamma.mat, np.eye(8) / 8)

    def test_encoded_state(self):
        scenario = three_qubit_example(0.6, 0.8, 0.3, 0.5)
        rho = scenario.rho.mat
        assert rho[0, 0] == pytest.approx(0.36)
        assert rho[7, 7] == pytest.approx(0.64)
        assert rho[0, 7] == pytest.approx(0.48)

    def test_product_plus_minus_projectors(self):
        scenario = three_qubit_example(SQRT_HALF, SQRT_HALF, 0.3, 0.5)
        assert scenario.povm.num_outcomes == 8
        assert np.allclose(scenario.povm.volumes(), 1.0)
        # every |s1 s2 s3> in the +/- basis has overlap 1/8 with each computational state
        for effect in scenario.povm.effects:
            assert np.allclose(np.diag(effect).real, 1 / 8)

    def test_prior_weights(self):
        scenario = three_qubit_example(SQRT_HALF, SQRT_HALF, 0.3, 0.5)
        diagonal = np.diag(scenario.gamma.mat).real
        assert diagonal[0] == pytest.approx(0.3)
        assert diagonal[7] == pytest.approx(0.5)
        assert np.allclose(diagonal[1:7], 0.2 / 6)

    @pytest.mark.parametrize("params", [
        (1.0, 1.0, 0.3, 0.3),
        (SQRT_HALF, SQRT_HALF, 0.0, 0.5),
        (SQRT_HALF, SQRT_HALF, 0.5, 0.5),
        (SQRT_HALF, SQRT_HALF, -0.1, 0.5),
    ])
    def test_rejects_invalid_parameters(self, params):
        with pytest.raises(InvalidParameters):
            three_qubit_example(*params)


class TestRandomAndRecovered:
    def test_commuting_random_example(self):
        scenario = generate_example("random", d=4, m=3, regime="commuting", seed=5)
        assert commutator_norm(scenario.rho.mat, scenario.gamma.mat) <= 1e-12

    def test_random_example_is_seeded(self):
        a = generate_example("random", d=3, m=2, regime="general", seed=11)
        b = generate_example("random", d=3, m=2, regime="general", seed=11)
        assert np.array_equal(a.rho.mat, b.rho.mat)
        assert np.array_equal(a.povm.stacked(), b.povm.stacked())

    def test_petz_recovered_instance(self):
        scenario = petz_recovered_instance(4, 2, seed=3)
        flags = commuting_flags(scenario.rho, scenario.povm, scenario.gamma)
        assert flags.regime is Regime.FULLY_CLASSICAL
        assert petz_recovery_residual(scenario.rho, scenario.povm, scenario.gamma) <= 1e-9

    def test_petz_recovered_rejects_too_many_blocks(self):
        with pytest.raises(InvalidParameters):
            petz_recovered_instance(2, 3)


class TestGenerateExample:
    def test_kinds(self):
        assert set(EXAMPLE_KINDS) == {"gibbs", "three-qubit", "random", "petz-recovered"}

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameters, match="Unknown example kind"):
            generate_example("ising")

    def test_unknown_parameter(self):
        with pytest.raises(InvalidParameters, match="Bad parameters"):
            generate_example("gibbs", d=2, beta=1.0, temperature=3.0)

    def test_unknown_regime(self):
        with pytest.raises(InvalidParameters):
            generate_example("random", d=2, m=2, regime="chaotic")
