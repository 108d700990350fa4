"""
Named example scenarios.

- ``gibbs``: thermal prior of an equidistant spectrum, energy-basis measurement,
  pure state maximally unbiased with the energy basis.
- ``three-qubit``: repetition-code encoding of a qubit measured qubit-wise in
  the ``{|+>, |->}`` basis, prior concentrated on the code space.
- ``random``: a seeded random instance of a given regime.
- ``petz-recovered``: fully classical block instance whose state is block-wise
  proportional to the prior, so the Petz map recovers it exactly.
"""
import itertools
import logging
import math
from typing import Any, Callable, Dict

import numpy as np

from src.core.errors import InvalidParameters
from src.core.qstate import DensityOperator, Povm, gibbs_prior
from .random_instances import (REGIMES, random_blocks, random_instance, random_spectrum,
                               random_unitary)
from .scenario import Scenario

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9


def _require_dimension(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidParameters(f"Parameter '{name}' must be a positive integer, got {value!r}")
    return int(value)


def _require_finite(name: str, value: Any) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameters(f"Parameter '{name}' must be a number, got {value!r}") from None
    if not math.isfinite(number):
        raise InvalidParameters(f"Parameter '{name}' must be finite, got {value!r}")
    return number


def gibbs_example(d: int, beta: float, omega: float = 1.0) -> Scenario:
    """Thermal prior for ``E_n = n * omega`` with the state ``|psi> = sum_n |n> / sqrt(d)``."""
    d = _require_dimension("d", d)
    beta = _require_finite("beta", beta)
    omega = _require_finite("omega", omega)
    if beta <= 0:
        raise InvalidParameters(f"Inverse temperature must be positive, got {beta}")
    return Scenario(
        name=f"gibbs-d{d}-beta{beta:g}-omega{omega:g}",
        rho=DensityOperator.pure(np.ones(d)),
        gamma=gibbs_prior(omega * np.arange(d), beta),
        povm=Povm.computational(d),
    )


def _plus_minus_povm() -> Povm:
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    minus = np.array([1.0, -1.0]) / math.sqrt(2)
    vectors = [np.kron(np.kron(a, b), c) for a, b, c in itertools.product((plus, minus), repeat=3)]
    return Povm.projective(vectors)


def three_qubit_example(alpha: complex, beta: complex, p0: float, p1: float) -> Scenario:
    """Encoded state ``alpha|000> + beta|111>`` with prior ``p0|000><000| + p1|111><111| + rest``.

    The remaining weight ``1 - p0 - p1`` is spread uniformly over the six
    other computational basis states.
    """
    try:
        alpha, beta = complex(alpha), complex(beta)
    except (TypeError, ValueError):
        raise InvalidParameters(f"Amplitudes must be numbers, got {alpha!r}, {beta!r}") from None
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise InvalidParameters(f"Amplitudes must satisfy |alpha|^2 + |beta|^2 = 1, got {norm:.12f}")
    p0, p1 = _require_finite("p0", p0), _require_finite("p1", p1)
    if p0 <= 0 or p1 <= 0 or p0 + p1 >= 1:
        raise InvalidParameters(f"Prior weights need p0, p1 > 0 and p0 + p1 < 1, got p0={p0}, p1={p1}")

    psi = np.zeros(8, dtype=complex)
    psi[0], psi[7] = alpha, beta
    weights = np.full(8, (1.0 - p0 - p1) / 6.0)
    weights[0], weights[7] = p0, p1
    return Scenario(
        name=f"three-qubit-p0{p0:g}-p1{p1:g}",
        rho=DensityOperator(np.outer(psi, psi.conj())),
        gamma=DensityOperator.from_spectrum(weights),
        povm=_plus_minus_povm(),
    )


def random_example(d: int, m: int, regime: str = "general", seed: int = 0) -> Scenario:
    d, m = _require_dimension("d", d), _require_dimension("m", m)
    if regime not in REGIMES:
        raise InvalidParameters(f"Unknown regime '{regime}', expected one of {', '.join(REGIMES)}")
    rng = np.random.default_rng(int(seed))
    return random_instance(d, m, regime, rng, name=f"random-{regime}-d{d}-m{m}-seed{seed}")


def petz_recovered_instance(d: int, m: int, seed: int = 0) -> Scenario:
    """Fully classical block scenario with ``rho`` proportional to ``gamma`` on every block."""
    d, m = _require_dimension("d", d), _require_dimension("m", m)
    if m > d:
        raise InvalidParameters(f"Need at most d={d} blocks, got m={m}")
    rng = np.random.default_rng(int(seed))
    basis = random_unitary(d, rng)
    blocks = random_blocks(d, m, rng)
    prior = random_spectrum(d, rng)
    block_weights = random_spectrum(m, rng)
    state = np.zeros(d)
    for block, weight in zip(blocks, block_weights):
        state[block] = weight * prior[block] / prior[block].sum()
    return Scenario(
        name=f"petz-recovered-d{d}-m{m}-seed{seed}",
        rho=DensityOperator.from_spectrum(state, basis),
        gamma=DensityOperator.from_spectrum(prior, basis),
        povm=Povm.from_blocks(blocks, basis),
    )


EXAMPLE_KINDS: Dict[str, Callable[..., Scenario]] = {
    "gibbs": gibbs_example,
    "three-qubit": three_qubit_example,
    "random": random_example,
    "petz-recovered": petz_recovered_instance,
}


def generate_example(kind: str, **params) -> Scenario:
    """Build a named example.

    Raises:
        InvalidParameters: For an unknown kind, unknown parameter names or out-of-range values.
    """
    if kind not in EXAMPLE_KINDS:
        raise InvalidParameters(f"Unknown example kind '{kind}', expected one of {', '.join(EXAMPLE_KINDS)}")
    try:
        scenario = EXAMPLE_KINDS[kind](**params)
    except TypeError as e:
        raise InvalidParameters(f"Bad parameters for '{kind}': {e}") from e
    logger.info(f"Generated example '{scenario.name}'")
    return scenario
