"""
A named (state, prior, measurement) triple with optional tolerance overrides.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.core.errors import DimensionMismatch
from src.core.linop import DEFAULT_TOLERANCE, Tolerance
from src.core.qstate import DensityOperator, Povm


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything needed to evaluate one entropy report.

    Attributes:
        name: Label used in reports and counterexample file names.
        rho: State of the system.
        gamma: Reference prior.
        povm: Measurement.
        tolerance: Overrides of the default numerical thresholds, if any.
    """
    name: str
    rho: DensityOperator
    gamma: DensityOperator
    povm: Povm
    tolerance: Optional[Tolerance] = field(default=None)

    def __post_init__(self):
        if not (self.rho.dim == self.gamma.dim == self.povm.dim):
            raise DimensionMismatch(
                f"Scenario '{self.name}': state dimension {self.rho.dim}, prior dimension "
                f"{self.gamma.dim}, POVM dimension {self.povm.dim}"
            )

    @property
    def tol(self) -> Tolerance:
        return self.tolerance or DEFAULT_TOLERANCE

    @property
    def dims(self) -> Tuple[int, int]:
        """``(d, m)``: system dimension and number of outcomes."""
        return self.rho.dim, self.povm.num_outcomes
