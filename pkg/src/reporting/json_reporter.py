"""
Structured (JSON) rendering of entropy reports and verification summaries.

Values are always stored in nats. Infinite values are written as the string
``"inf"``; Indeterminate or absent values as ``null``. Keys are sorted so equal
inputs give byte-identical documents.
"""
import json
from typing import Any, Dict

from src.core.oentropy import EntropyReport
from src.reporting.base_reporter import BaseReporter
from src.verification.verifier import SCHEMA_VERSION, VerificationSummary


class JSONReporter(BaseReporter):
    """Renders versioned JSON documents."""

    def report_to_dict(self, report: EntropyReport, name: str) -> Dict[str, Any]:
        enc = self.encode_extended
        d, m = report.dims
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "report",
            "scenario": name,
            "units": "nats",
            "dims": {"d": d, "m": m},
            "regime": report.regime.value,
            "commuting_flags": report.commuting_flags.to_dict(),
            "entropies": {
                "s_vn": enc(report.s_vn),
                "s_original": enc(report.s_original),
                "s_clax": enc(report.s_clax),
                "s1": enc(report.s1),
                "s2": enc(report.s2),
                "s3": enc(report.s3),
            },
            "excesses": {
                "sigma_original": enc(report.sigma_original),
                "sigma1": enc(report.sigma1),
                "sigma2": enc(report.sigma2),
                "sigma3": enc(report.sigma3),
            },
            "checks": {
                "s3_identity_residual": enc(report.s3_identity_residual),
                "petz_recovery_residual": enc(report.petz_residual),
            },
        }

    def summary_to_dict(self, summary: VerificationSummary) -> Dict[str, Any]:
        document = summary.to_dict()
        for tally in document["properties"].values():
            tally["max_residual"] = self.encode_extended(tally["max_residual"])
        for failure in document["failures"]:
            failure["residual"] = self.encode_extended(failure["residual"])
        return document

    def _dumps(self, document: Dict[str, Any]) -> str:
        return json.dumps(document, indent=self.config.get_option("indent"), sort_keys=True,
                          allow_nan=False) + "\n"

    def render_report(self, report: EntropyReport, name: str) -> str:
        return self._dumps(self.report_to_dict(report, name))

    def render_summary(self, summary: VerificationSummary) -> str:
        return self._dumps(self.summary_to_dict(summary))
