"""
Seeded random sweeps over the identities, reductions and inequalities.
"""
import itertools
import math

import pytest

from src.core.oentropy import (clax_oe, classical_sigma_identity_check, monotonicity_check,
                               original_oe, ordering_check, petz_criterion_check, s1, s2, s3,
                               s3_via_process, sigma1, sigma2, sigma3)
from src.core.qstate import DensityOperator
from src.core.retro import choi_relation_residual
from src.scenarios.example_generators import petz_recovered_instance
from src.scenarios.random_instances import (block_instance, random_full_rank_state, random_instance,
                                            random_povm, random_stochastic, trial_rng)

SEED = 42
TOLERANCE = 1e-9
DIMS = [(2, 2), (3, 2), (3, 4), (4, 3)]


def sweep(count, regime, dims=DIMS, seed=SEED):
    """``count`` seeded scenarios cycling through ``dims``."""
    for index, (d, m) in zip(range(count), itertools.cycle(dims)):
        rng = trial_rng(seed, index)
        yield random_instance(d, m, regime, rng, name=f"{regime}-{index}"), rng


def uniform(d):
    return DensityOperator.maximally_mixed(d)


def test_choi_relation():
    worst = 0.0
    for index, (d, m) in zip(range(200), itertools.cycle(DIMS)):
        rng = trial_rng(SEED, index)
        worst = max(worst, choi_relation_residual(random_povm(d, m, rng), random_full_rank_state(d, rng)))
    assert worst <= TOLERANCE


def test_s3_process_identity():
    for s, _ in sweep(200, "full-rank"):
        assert abs(s3(s.rho, s.povm, s.gamma) - s3_via_process(s.rho, s.povm, s.gamma)) <= 1e-8, s.name


def test_classical_bridge():
    for s, _ in sweep(200, "commuting"):
        assert classical_sigma_identity_check(s.rho, s.povm, s.gamma) <= TOLERANCE, s.name
        assert classical_sigma_identity_check(s.rho, s.povm, uniform(s.rho.dim)) <= TOLERANCE, s.name


class TestReductions:
    def test_uniform_prior(self):
        for s, _ in sweep(200, "general"):
            u = uniform(s.rho.dim)
            original = original_oe(s.rho, s.povm)
            assert s1(s.rho, s.povm, u) == pytest.approx(original, abs=TOLERANCE), s.name
            assert s3(s.rho, s.povm, u) == pytest.approx(original, abs=TOLERANCE), s.name

    def test_commuting_prior(self):
        for s, _ in sweep(200, "commuting"):
            clax = clax_oe(s.rho, s.povm, s.gamma)
            assert s1(s.rho, s.povm, s.gamma) == pytest.approx(clax, abs=TOLERANCE), s.name
            assert s3(s.rho, s.povm, s.gamma) == pytest.approx(clax, abs=TOLERANCE), s.name

    def test_fully_classical(self):
        for s, _ in sweep(200, "fully-classical"):
            clax = clax_oe(s.rho, s.povm, s.gamma)
            assert s2(s.rho, s.povm, s.gamma) == pytest.approx(clax, abs=TOLERANCE), s.name

    def test_block_uniform_prior(self):
        block_dims = [(2, 1), (3, 2), (4, 2), (5, 3)]
        for index, (d, m) in zip(range(200), itertools.cycle(block_dims)):
            s = block_instance(d, m, trial_rng(SEED, index))
            assert clax_oe(s.rho, s.povm, s.gamma) == pytest.approx(original_oe(s.rho, s.povm), abs=TOLERANCE)


class TestInequalities:
    @pytest.mark.parametrize("regime", ["general", "commuting", "fully-classical", "full-rank"])
    def test_sigmas_and_ordering(self, regime):
        # 4 regimes x 125 instances
        for s, _ in sweep(125, regime, seed=SEED + 1):
            for sigma in (sigma1, sigma2, sigma3):
                value = sigma(s.rho, s.povm, s.gamma)
                assert math.isinf(value) or value >= -TOLERANCE, f"{s.name}: {sigma.__name__} = {value}"
            report = ordering_check(s.rho, s.povm, s.gamma)
            for gap in (report.gap12, report.gap13):
                assert gap is None or gap >= -TOLERANCE, s.name


def test_petz_criterion_on_recovered_instances():
    for index, (d, m) in enumerate([(2, 1), (2, 2), (3, 2), (4, 2), (4, 3), (5, 2)]):
        s = petz_recovered_instance(d, m, seed=index)
        report = petz_criterion_check(s.rho, s.povm, s.gamma)
        assert report.recovered, s.name
        assert all(value <= 1e-7 for value in report.finite_sigmas()), s.name
        assert report.commutator_norm <= 1e-7, s.name


def test_monotonicity():
    s2_evaluated = 0
    for s, rng in sweep(200, "full-rank", seed=SEED + 2):
        for _ in range(2):
            m = s.povm.num_outcomes
            w = random_stochastic(int(rng.integers(1, m + 1)), m, rng)
            report = monotonicity_check(s.rho, s.povm, s.gamma, w)
            assert report.violations(TOLERANCE) == [], s.name
            s2_evaluated += report.delta2 is not None
    # S2 changes are diagnostic only
    assert s2_evaluated > 0

