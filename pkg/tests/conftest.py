import os
import sys
import shutil

import numpy as np
import pytest

# Add the project root to the Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from src.core.qstate import DensityOperator, Povm, gibbs_prior
from src.scenarios.scenario import Scenario


def get_results_dirs():
    """Get all results directories in the tests folder."""
    results_dirs = []
    for root, dirs, files in os.walk(os.path.dirname(os.path.abspath(__file__))):
        if 'results' in dirs:
            results_dirs.append(os.path.join(root, 'results'))
    return results_dirs


@pytest.fixture(autouse=True, scope="session")
def cleanup_results_dirs():
    """Clean up all results directories before running tests."""
    results_dirs = get_results_dirs()
    for results_dir in results_dirs:
        if os.path.exists(results_dir):
            shutil.rmtree(results_dir)
        os.makedirs(results_dir)
    yield


@pytest.fixture
def rng():
    """Fixed-seed generator for tests that draw random operators."""
    return np.random.default_rng(20240611)


@pytest.fixture
def qubit_scenario():
    """Pure |+> state, thermal prior, computational-basis measurement."""
    return Scenario(
        name="qubit-plus",
        rho=DensityOperator.pure([1.0, 1.0]),
        gamma=gibbs_prior([0.0, 1.0], beta=1.0),
        povm=Povm.computational(2),
    )


@pytest.fixture
def uniform_scenario():
    """Maximally mixed qubit with a uniform prior; every operator commutes."""
    return Scenario(
        name="uniform-qubit",
        rho=DensityOperator.maximally_mixed(2),
        gamma=DensityOperator.maximally_mixed(2),
        povm=Povm.computational(2),
    )
