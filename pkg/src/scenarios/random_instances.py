"""
Seeded random states, priors, POVMs and stochastic matrices.

Construction recipes:

- states: Wishart ``G G^dagger / Tr`` with ``G`` a complex Gaussian ``d x r`` matrix;
- POVMs: ``m`` Wishart blocks ``B_y`` normalized as ``S^-1/2 B_y S^-1/2`` with ``S = sum_y B_y``;
- stochastic matrices: nonnegative uniforms normalized per column;
- bases: Haar unitaries from ``scipy.stats.unitary_group``.

Every function draws only from the generator it is given, so an instance is
reproducible from the seed alone.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from src.core.errors import InvalidParameters
from src.core.linop import psd_inv_sqrt
from src.core.qstate import DensityOperator, Povm, StochasticMatrix
from .scenario import Scenario

logger = logging.getLogger(__name__)

REGIMES = ("general", "commuting", "fully-classical", "full-rank")

# Weight of the maximally mixed state blended into full-rank draws; keeps the
# condition number bounded.
FULL_RANK_BLEND = 0.05


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Generator for one trial, seeded with ``seed XOR trial_index``."""
    return np.random.default_rng(int(seed) ^ int(trial_index))


def _complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(d, random_state=rng)


def random_state(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityOperator:
    """Wishart state of the given rank (full rank when omitted)."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise InvalidParameters(f"Rank must lie in [1, {d}], got {rank}")
    g = _complex_gaussian(rng, d, rank)
    w = g @ g.conj().T
    return DensityOperator(w / np.trace(w).real)


def random_full_rank_state(d: int, rng: np.random.Generator) -> DensityOperator:
    w = random_state(d, rng).mat
    return DensityOperator((1 - FULL_RANK_BLEND) * w + FULL_RANK_BLEND * np.eye(d) / d)


def random_spectrum(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Probability vector with ``rank`` nonzero entries (all when omitted)."""
    rank = d if rank is None else rank
    values = np.zeros(d)
    values[:rank] = rng.uniform(0.05, 1.0, size=rank)
    return values / values.sum()


def random_povm(d: int, m: int, rng: np.random.Generator) -> Povm:
    if d < 1 or m < 1:
        raise InvalidParameters(f"POVM needs d >= 1 and m >= 1, got d={d}, m={m}")
    blocks = []
    for _ in range(m):
        g = _complex_gaussian(rng, d, d)
        blocks.append(g @ g.conj().T)
    norm = psd_inv_sqrt(sum(blocks))
    return Povm(tuple(norm @ b @ norm for b in blocks))


def random_stochastic(rows: int, cols: int, rng: np.random.Generator) -> StochasticMatrix:
    w = rng.uniform(0.0, 1.0, size=(rows, cols))
    return StochasticMatrix(w / w.sum(axis=0, keepdims=True))


def random_diagonal_povm(d: int, m: int, basis: np.ndarray, rng: np.random.Generator) -> Povm:
    """POVM whose effects are all diagonal in ``basis``: ``Pi_y = U diag(w[y, :]) U^dagger``."""
    w = random_stochastic(m, d, rng).w
    return Povm(tuple((basis * row) @ basis.conj().T for row in w))


def random_blocks(d: int, m: int, rng: np.random.Generator) -> List[List[int]]:
    """Random partition of ``range(d)`` into ``m`` non-empty blocks."""
    if not 1 <= m <= d:
        raise InvalidParameters(f"Cannot split {d} levels into {m} non-empty blocks")
    order = rng.permutation(d)
    cuts = np.sort(rng.choice(np.arange(1, d), size=m - 1, replace=False)) if m > 1 else []
    return [sorted(int(i) for i in part) for part in np.split(order, cuts)]


def block_uniform_prior(blocks: Sequence[Sequence[int]], weights: Sequence[float],
                        basis: Optional[np.ndarray] = None) -> DensityOperator:
    """``gamma = sum_y G_y Pi_y / |K(y)|`` for projective blocks ``Pi_y``."""
    d = sum(len(block) for block in blocks)
    diagonal = np.zeros(d)
    for block, weight in zip(blocks, weights):
        diagonal[list(block)] = weight / len(block)
    return DensityOperator.from_spectrum(diagonal / diagonal.sum(), basis)


def block_instance(d: int, m: int, rng: np.random.Generator, name: str = "block") -> Scenario:
    """Fully classical block scenario with a block-uniform prior of random weights."""
    basis = random_unitary(d, rng)
    blocks = random_blocks(d, m, rng)
    return Scenario(
        name=name,
        rho=DensityOperator.from_spectrum(random_spectrum(d, rng), basis),
        gamma=block_uniform_prior(blocks, random_spectrum(m, rng), basis),
        povm=Povm.from_blocks(blocks, basis),
    )


def random_instance(d: int, m: int, regime: str, rng: np.random.Generator,
                    name: Optional[str] = None) -> Scenario:
    """Random scenario in one of :data:`REGIMES`.

    - ``general``: state of random rank, full-rank prior, random POVM;
    - ``commuting``: state and prior diagonal in a shared Haar basis, random POVM;
    - ``fully-classical``: state, prior and every effect diagonal in a shared basis;
    - ``full-rank``: full-rank state and prior, random POVM.

    Raises:
        InvalidParameters: For an unknown regime or non-positive dimensions.
    """
    if regime not in REGIMES:
        raise InvalidParameters(f"Unknown regime '{regime}', expected one of {', '.join(REGIMES)}")
    if d < 1 or m < 1:
        raise InvalidParameters(f"Dimensions must be positive, got d={d}, m={m}")
    name = name or f"random-{regime}-d{d}-m{m}"

    if regime == "general":
        rank = int(rng.integers(1, d + 1))
        rho = random_state(d, rng, rank)
        gamma = random_full_rank_state(d, rng)
        povm = random_povm(d, m, rng)
    elif regime == "commuting":
        basis = random_unitary(d, rng)
        rho = DensityOperator.from_spectrum(random_spectrum(d, rng, int(rng.integers(1, d + 1))), basis)
        gamma = DensityOperator.from_spectrum(random_spectrum(d, rng), basis)
        povm = random_povm(d, m, rng)
    elif regime == "fully-classical":
        basis = random_unitary(d, rng)
        rho = DensityOperator.from_spectrum(random_spectrum(d, rng, int(rng.integers(1, d + 1))), basis)
        gamma = DensityOperator.from_spectrum(random_spectrum(d, rng), basis)
        povm = random_diagonal_povm(d, m, basis, rng)
    else:
        rho = random_full_rank_state(d, rng)
        gamma = random_full_rank_state(d, rng)
        povm = random_povm(d, m, rng)

    logger.debug(f"Generated {name}")
    return Scenario(name=name, rho=rho, gamma=gamma, povm=povm)
