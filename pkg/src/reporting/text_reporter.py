"""
Plain-text tables for the terminal.
"""
import math
from typing import List, Optional, Tuple

from src.core.oentropy import EntropyReport
from src.reporting.base_reporter import BaseReporter
from src.verification.verifier import VerificationSummary


class TextReporter(BaseReporter):
    """Renders aligned two-column tables."""

    def format_value(self, value: Optional[float]) -> str:
        if value is None:
            return "n/a"
        converted = self.to_units(value)
        if math.isinf(converted):
            return "inf"
        return f"{converted:.{self.config.get_option('precision')}g}"

    @staticmethod
    def _table(rows: List[Tuple[str, str]]) -> str:
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"  {label.ljust(width)}  {value}" for label, value in rows)

    def render_report(self, report: EntropyReport, name: str) -> str:
        fmt = self.format_value
        flags = report.commuting_flags
        d, m = report.dims
        header = [
            f"Scenario: {name}",
            f"Dimensions: d={d}, m={m}    Regime: {report.regime.value}    Units: {self.units}",
            f"Commuting: [rho,gamma]={flags.rho_gamma}  [rho,Pi]={flags.rho_povm}  [gamma,Pi]={flags.gamma_povm}",
        ]
        entropies = [
            ("S(rho)", fmt(report.s_vn)),
            ("S_M(rho)", fmt(report.s_original)),
            ("S_clax", fmt(report.s_clax)),
            ("S1", fmt(report.s1)),
            ("S2", fmt(report.s2)),
            ("S3", fmt(report.s3)),
        ]
        excesses = [
            ("Sigma_M", fmt(report.sigma_original)),
            ("Sigma1", fmt(report.sigma1)),
            ("Sigma2", fmt(report.sigma2)),
            ("Sigma3", fmt(report.sigma3)),
        ]
        checks = [
            ("S3 identity residual", "n/a" if report.s3_identity_residual is None
             else f"{report.s3_identity_residual:.3e}"),
            ("Petz recovery residual", "n/a" if report.petz_residual is None
             else f"{report.petz_residual:.3e}"),
        ]
        sections = ["\n".join(header), "Entropies:", self._table(entropies),
                    "Excess over S(rho):", self._table(excesses), "Checks:", self._table(checks)]
        return "\n".join(sections) + "\n"

    def render_summary(self, summary: VerificationSummary) -> str:
        rows = []
        for name, tally in summary.properties.items():
            if tally.evaluated == 0 and tally.skipped == 0:
                continue
            residual = "n/a" if tally.max_residual is None else f"{tally.max_residual:.3e}"
            marker = "" if tally.contracted else " (diagnostic)"
            rows.append((f"{name}{marker}", f"{tally.passed}/{tally.evaluated} passed, "
                                            f"{tally.skipped} skipped, max residual {residual}"))
        lines = [
            f"Verification: {summary.trials} trials, seed {summary.config['seed']}",
            self._table(rows) if rows else "  (no properties evaluated)",
            f"S2 decreases under coarse-graining found: {summary.diagnostics['s2_monotonicity_decreases']}",
            f"Status: {'PASS' if summary.passed else 'FAIL'} ({len(summary.failures)} failure(s))",
        ]
        return "\n".join(lines) + "\n"
