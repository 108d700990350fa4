"""
Exception hierarchy shared by every module of the package.
"""
from typing import Optional


class QOEntropyError(Exception):
    """Base class for all errors raised by qoentropy."""


class DimensionMismatch(QOEntropyError, ValueError):
    """Operands have incompatible shapes."""


class NotHermitian(QOEntropyError, ValueError):
    """A matrix expected to be Hermitian has a large anti-Hermitian part."""


class SingularInput(QOEntropyError, ValueError):
    """A matrix function is undefined at a retained eigenvalue."""


class FalsifyingEvidence(QOEntropyError, ValueError):
    """The prior assigns zero probability to an outcome that carries weight."""


class NonPositiveBeta(QOEntropyError, ValueError):
    """Inverse temperature must be strictly positive."""


class NonCommutingPrior(QOEntropyError, ValueError):
    """The state and prior do not commute where commutation is required."""


class InvalidParameters(QOEntropyError, ValueError):
    """Generator or configuration parameters are out of range."""


class ParseError(QOEntropyError):
    """A scenario file could not be parsed."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class ValidationError(QOEntropyError, ValueError):
    """A value violates a type invariant.

    Attributes:
        invariant: Name of the violated invariant.
        residual: The measured deviation that triggered the failure.
    """

    def __init__(self, invariant: str, residual: float, message: str = ""):
        self.invariant = invariant
        self.residual = float(residual)
        detail = f": {message}" if message else ""
        super().__init__(f"{invariant} violated (residual {self.residual:.3e}){detail}")
