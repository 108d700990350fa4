"""
Dense complex linear-operator kernel.

All operators are square ``numpy`` arrays of dtype complex128 expressed in a
fixed computational basis. Composite operators on two systems always put the
output system B first and the input system A second, so ``kron(b_op, a_op)``
and ``partial_trace(x, (dB, dA), which)`` agree on the factor order.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotHermitian, SingularInput

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[np.ndarray], np.ndarray]

# Mixing weight for joint diagonalization of commuting pairs; any irrational
# value avoids accidental degeneracies of a + c*b.
_JOINT_MIX = 0.6180339887498949


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by every spectral routine.

    Attributes:
        eig_cut: Relative cut; eigenvalues ``<= eig_cut * max|lambda|`` count as zero.
        herm_tol: Largest admissible anti-Hermitian part, relative to ``max(1, |a|_max)``.
        support_tol: Relative threshold for support-containment tests.
    """
    eig_cut: float = 1e-12
    herm_tol: float = 1e-10
    support_tol: float = 1e-9

    def __post_init__(self):
        for name in ("eig_cut", "herm_tol", "support_tol"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise ValueError(f"Tolerance '{name}' must be strictly positive, got {value!r}")
        if not self.eig_cut < self.support_tol < 1:
            raise ValueError(
                f"Tolerance requires eig_cut < support_tol < 1, got "
                f"eig_cut={self.eig_cut}, support_tol={self.support_tol}"
            )

    def with_overrides(self, **kwargs) -> "Tolerance":
        """Return a copy with some fields replaced."""
        fields = {"eig_cut": self.eig_cut, "herm_tol": self.herm_tol, "support_tol": self.support_tol}
        unknown = [key for key in kwargs if key not in fields]
        if unknown:
            raise ValueError(f"Unknown tolerance fields: {', '.join(unknown)}")
        fields.update({key: float(value) for key, value in kwargs.items()})
        return Tolerance(**fields)

    def to_dict(self) -> dict:
        return {"eig_cut": self.eig_cut, "herm_tol": self.herm_tol, "support_tol": self.support_tol}


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues sorted in descending order.
        eigenvectors: Unitary matrix whose columns are the matching eigenvectors.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Return ``V diag(lambda) V^dagger``."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def retained(self, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
        """Boolean mask of eigenvalues above the relative cut."""
        return self.eigenvalues > spectral_cut(self.eigenvalues, tol)


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex matrix.

    Raises:
        DimensionMismatch: If ``a`` is not a non-empty square 2-D array.
    """
    mat = np.asarray(getattr(a, "mat", a), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise DimensionMismatch(f"Expected a non-empty square matrix, got shape {mat.shape}")
    return mat


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(getattr(a, "mat", a)), "fro"))


def spectral_cut(eigenvalues: np.ndarray, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Absolute zero-threshold for a spectrum: ``eig_cut * max|lambda|``."""
    if eigenvalues.size == 0:
        return 0.0
    return tol.eig_cut * float(np.max(np.abs(eigenvalues)))


def hermitian_part(a, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Return ``(a + a^dagger)/2`` after checking that ``a`` is Hermitian.

    Raises:
        NotHermitian: If ``|a - a^dagger|_max > herm_tol * max(1, |a|_max)``.
    """
    mat = as_matrix(a)
    skew = float(np.max(np.abs(mat - mat.conj().T)))
    scale = max(1.0, float(np.max(np.abs(mat))))
    if skew > tol.herm_tol * scale:
        raise NotHermitian(
            f"Anti-Hermitian residual {skew:.3e} exceeds {tol.herm_tol:.1e} x {scale:.3e}"
        )
    if skew > 0:
        logger.debug(f"Symmetrizing input with anti-Hermitian residual {skew:.3e}")
    return 0.5 * (mat + mat.conj().T)


def is_hermitian(a, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    try:
        hermitian_part(a, tol)
    except NotHermitian:
        return False
    return True


def eig_hermitian(a, tol: Tolerance = DEFAULT_TOLERANCE) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix.

    Args:
        a: Hermitian matrix (symmetrized before decomposition).
        tol: Numerical thresholds.

    Returns:
        EigenDecomposition with eigenvalues in descending order.

    Raises:
        NotHermitian: If ``a`` fails the Hermiticity precondition.
    """
    herm = hermitian_part(a, tol)
    values, vectors = scipy.linalg.eigh(herm)
    order = np.argsort(values)[::-1]
    return EigenDecomposition(eigenvalues=values[order].real.copy(), eigenvectors=vectors[:, order].copy())


def fn_hermitian(a, f: ScalarFunction, on_support_only: bool = False,
                 tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Args:
        a: Hermitian matrix.
        f: Vectorized scalar function applied to the eigenvalues.
        on_support_only: If set, eigenvalues at or below the relative cut are
            mapped to 0 instead of being passed to ``f`` (pseudo-function).
        tol: Numerical thresholds.

    Returns:
        ``V f(Lambda) V^dagger``.

    Raises:
        SingularInput: If ``f`` is not finite at a retained eigenvalue.
    """
    eig = eig_hermitian(a, tol)
    values = eig.eigenvalues
    if on_support_only:
        keep = eig.retained(tol)
    else:
        keep = np.ones_like(values, dtype=bool)
    mapped = np.zeros(values.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mapped[keep] = f(values[keep])
    if not np.all(np.isfinite(mapped)):
        bad = values[keep][~np.isfinite(mapped[keep])]
        raise SingularInput(f"Function undefined at retained eigenvalue(s) {bad.tolist()}")
    v = eig.eigenvectors
    return (v * mapped) @ v.conj().T


def psd_sqrt(a, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Square root of a PSD matrix; roundoff-negative eigenvalues are dropped."""
    return fn_hermitian(a, np.sqrt, on_support_only=True, tol=tol)


def psd_inv_sqrt(a, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Inverse square root on the support (pseudo-inverse convention)."""
    return fn_hermitian(a, lambda x: 1.0 / np.sqrt(x), on_support_only=True, tol=tol)


def support_projector(a, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with retained eigenvalues."""
    eig = eig_hermitian(a, tol)
    cols = eig.eigenvectors[:, eig.retained(tol)]
    return cols @ cols.conj().T


def support_basis(a, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Retained eigenvalues and the isometry whose columns span the support."""
    eig = eig_hermitian(a, tol)
    keep = eig.retained(tol)
    return eig.eigenvalues[keep], eig.eigenvectors[:, keep]


def is_full_rank(a, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff every eigenvalue of the PSD matrix ``a`` survives the relative cut."""
    return bool(eig_hermitian(a, tol).retained(tol).all())


def support_leq(a, b, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff ``supp(a)`` is contained in ``supp(b)`` at ``support_tol``."""
    a_mat = hermitian_part(a, tol)
    norm_a = frobenius(a_mat)
    if norm_a == 0.0:
        return True
    outside = np.eye(a_mat.shape[0]) - support_projector(b, tol)
    if outside.shape != a_mat.shape:
        raise DimensionMismatch(f"Cannot compare supports of shapes {a_mat.shape} and {outside.shape}")
    leak = frobenius(outside @ a_mat @ outside)
    return leak <= tol.support_tol * norm_a


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``a`` on the outer (first) index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(a, dims: Tuple[int, int], which: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator on (B, A).

    Args:
        a: Operator of dimension ``dB * dA``.
        dims: ``(dB, dA)``.
        which: ``"first"`` traces out B and returns an operator on A;
            ``"second"`` traces out A and returns an operator on B.

    Raises:
        DimensionMismatch: If the dimensions do not factor as declared.
    """
    mat = as_matrix(a)
    d_b, d_a = dims
    if d_b < 1 or d_a < 1 or mat.shape[0] != d_b * d_a:
        raise DimensionMismatch(f"Operator of dimension {mat.shape[0]} does not factor as {d_b} x {d_a}")
    blocks = mat.reshape(d_b, d_a, d_b, d_a)
    if which == "first":
        return np.einsum("ijik->jk", blocks)
    if which == "second":
        return np.einsum("ijkj->ik", blocks)
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


def transpose(a) -> np.ndarray:
    """Entry-wise transpose in the computational basis (no conjugation)."""
    return as_matrix(a).T.copy()


def commutator_norm(a, b) -> float:
    """Frobenius norm of ``[a, b]``."""
    x, y = as_matrix(a), as_matrix(b)
    return frobenius(x @ y - y @ x)


def relative_commutator_norm(a, b) -> float:
    """``|[a, b]|_F / (|a|_F |b|_F)``, zero when either operand vanishes."""
    scale = frobenius(a) * frobenius(b)
    if scale == 0.0:
        return 0.0
    return commutator_norm(a, b) / scale


def joint_diagonalize(a, b, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Unitary whose columns diagonalize two commuting Hermitian matrices.

    The eigenvectors of ``a + c b`` for an irrational mixing weight ``c``
    separate every joint eigenspace unless two joint eigenvalue pairs collide
    on that line, which does not happen for generic inputs.
    """
    return eig_hermitian(hermitian_part(a, tol) + _JOINT_MIX * hermitian_part(b, tol), tol).eigenvectors
