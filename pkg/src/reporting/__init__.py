"""Human-readable and structured rendering of reports."""
