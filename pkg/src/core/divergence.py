"""
Entropies and relative entropies with extended-real results.

Every divergence returns a ``float`` that is either finite or ``math.inf``;
``inf`` only ever comes from a failed support-containment test, never from
overflow. Natural logarithms throughout.
"""
import logging
import math
from typing import Optional

import numpy as np
import scipy.special
import scipy.stats

from .errors import DimensionMismatch
from .linop import (DEFAULT_TOLERANCE, Tolerance, eig_hermitian, hermitian_part,
                    spectral_cut, support_basis, support_leq)

logger = logging.getLogger(__name__)

INF = math.inf


def is_finite(value: Optional[float]) -> bool:
    return value is not None and math.isfinite(value)


def extended_difference(a: float, b: float) -> Optional[float]:
    """``a - b`` over the extended reals.

    ``inf - finite`` is ``inf``; a difference with ``inf`` on the subtrahend
    side is Indeterminate and returned as ``None``.
    """
    if math.isinf(b):
        return None
    if math.isinf(a):
        return INF
    return a - b


def extended_sum(a: float, b: float) -> float:
    if math.isinf(a) or math.isinf(b):
        return INF
    return a + b


def _probabilities(p) -> np.ndarray:
    return np.asarray(getattr(p, "probs", p), dtype=float).ravel()


def shannon(p) -> float:
    """``-sum p_i ln p_i`` with ``0 ln 0 = 0``."""
    probs = _probabilities(p)
    if probs.sum() == 0:
        return 0.0
    return float(scipy.stats.entropy(probs))


def von_neumann(rho, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``S(rho) = -Tr[rho ln rho]`` from the retained eigenvalues."""
    values = eig_hermitian(rho, tol).eigenvalues
    kept = values[values > spectral_cut(values, tol)]
    return shannon(kept)


def kl(p, q, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Kullback-Leibler divergence ``sum p_i ln(p_i / q_i)``.

    Returns ``inf`` when some ``p_i > support_tol`` sits on ``q_i <= eig_cut``.

    Raises:
        DimensionMismatch: If the two vectors differ in length.
    """
    p_arr, q_arr = _probabilities(p), _probabilities(q)
    if p_arr.shape != q_arr.shape:
        raise DimensionMismatch(f"Distributions of lengths {p_arr.size} and {q_arr.size}")
    outside = (p_arr > tol.support_tol) & (q_arr <= tol.eig_cut)
    if np.any(outside):
        return INF
    terms = (p_arr > 0) & (q_arr > tol.eig_cut)
    return float(np.sum(scipy.special.rel_entr(p_arr[terms], q_arr[terms])))


def _pair(rho, sigma, tol: Tolerance):
    a = hermitian_part(rho, tol)
    b = hermitian_part(sigma, tol)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Operators of shapes {a.shape} and {b.shape}")
    return a, b


def umegaki(rho, sigma, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Umegaki relative entropy ``Tr[rho (ln rho - ln sigma)]``.

    Accepts any unit-trace PSD operators (states or process operators). When
    ``sigma`` is singular the logarithm is taken on its support.
    """
    a, b = _pair(rho, sigma, tol)
    if not support_leq(a, b, tol):
        return INF
    values = eig_hermitian(a, tol).eigenvalues
    kept = values[values > spectral_cut(values, tol)]
    neg_entropy = float(np.sum(kept * np.log(kept)))
    sigma_values, sigma_vectors = support_basis(b, tol)
    weights = np.einsum("ik,ij,jk->k", sigma_vectors.conj(), a, sigma_vectors).real
    cross = float(np.sum(weights * np.log(sigma_values)))
    return neg_entropy - cross


def belavkin_staszewski(rho, sigma, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Belavkin-Staszewski relative entropy ``Tr[rho ln(rho sigma^-1)]``.

    Evaluated as ``Tr[sigma X ln X]`` with ``X = sigma^-1/2 rho sigma^-1/2``
    restricted to the support of ``sigma``, which keeps every logarithm on a
    Hermitian matrix.
    """
    a, b = _pair(rho, sigma, tol)
    if not support_leq(a, b, tol):
        return INF
    sigma_values, sigma_vectors = support_basis(b, tol)
    scale = 1.0 / np.sqrt(sigma_values)
    reduced = sigma_vectors.conj().T @ a @ sigma_vectors
    x = (scale[:, None] * reduced) * scale[None, :]
    eig = eig_hermitian(0.5 * (x + x.conj().T), tol)
    keep = eig.retained(tol)
    xlogx = np.zeros_like(eig.eigenvalues)
    xlogx[keep] = eig.eigenvalues[keep] * np.log(eig.eigenvalues[keep])
    overlaps = np.abs(eig.eigenvectors) ** 2
    return float(sigma_values @ overlaps @ xlogx)

