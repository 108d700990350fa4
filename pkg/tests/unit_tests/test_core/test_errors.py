"""
Unit tests for the exception hierarchy.
"""
import pytest

from src.core.errors import (DimensionMismatch, FalsifyingEvidence, InvalidParameters, ParseError,
                             QOEntropyError, ValidationError)


class TestErrors:
    @pytest.mark.parametrize("cls", [DimensionMismatch, FalsifyingEvidence, InvalidParameters])
    def test_value_errors_share_base(self, cls):
        assert issubclass(cls, QOEntropyError)
        assert issubclass(cls, ValueError)

    def test_validation_error_names_invariant_and_residual(self):
        error = ValidationError("povm closure", 0.1, "effects do not sum to the identity")
        assert error.invariant == "povm closure"
        assert error.residual == 0.1
        assert str(error) == "povm closure violated (residual 1.000e-01): effects do not sum to the identity"

    def test_parse_error_location(self):
        assert str(ParseError("bad", field="rho", line=3)) == "[line 3, field 'rho'] bad"
        assert str(ParseError("bad", line=1)) == "[line 1] bad"
        assert str(ParseError("bad")) == "bad"
        assert ParseError("bad", field="povm").field == "povm"
