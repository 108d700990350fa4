"""
Unit tests for the VerifyConfig class.
"""
import pytest

from src.core.errors import InvalidParameters
from src.scenarios.random_instances import REGIMES
from src.verification.verify_config import VerifyConfig


class TestVerifyConfig:
    """Test cases for the VerifyConfig class."""

    def test_init_with_defaults(self):
        """Test initialization with default values."""
        config = VerifyConfig()
        assert config.get_option("seed") == 42
        assert config.get_option("trials") == 50
        assert config.get_option("dims") == [(3, 2), (4, 4)]
        assert config.get_option("regimes") == list(REGIMES)
        assert config.get_option("workers") == 1
        assert config.get_option("counterexample_dir") is None

    def test_init_with_overrides(self):
        """Test initialization with override values."""
        config = VerifyConfig(seed=7, trials=3, dims=[[2, 2]])
        assert config.get_option("seed") == 7
        assert config.get_option("trials") == 3
        assert config.get_option("dims") == [(2, 2)]
        # Check defaults for non-overridden values
        assert config.get_option("workers") == 1

    def test_defaults_are_not_shared(self):
        """Mutating one config must not leak into the class defaults."""
        config = VerifyConfig()
        config.get_all_options()["dims"].append((9, 9))
        assert VerifyConfig().get_option("dims") == [(3, 2), (4, 4)]

    def test_regimes_canonical_order(self):
        config = VerifyConfig(regimes=["full-rank", "general"])
        assert config.get_option("regimes") == ["general", "full-rank"]

    def test_set_option(self):
        config = VerifyConfig()
        config.set_option("workers", 4)
        assert config.get_option("workers") == 4

    def test_get_option_with_default(self):
        assert VerifyConfig().get_option("unknown", "fallback") == "fallback"

    def test_to_dict(self):
        assert VerifyConfig(dims=[(3, 2)]).to_dict()["dims"] == [[3, 2]]

    @pytest.mark.parametrize("kwargs", [
        {"trials": 0},
        {"trials": "5"},
        {"seed": -1},
        {"seed": 2 ** 64},
        {"workers": 0},
        {"dims": []},
        {"dims": [(3, 0)]},
        {"dims": [(3, 2, 1)]},
        {"regimes": ["quantum-chaos"]},
        {"regimes": []},
        {"counterexample_dir": ""},
        {"bogus": 1},
    ])
    def test_invalid_values(self, kwargs):
        with pytest.raises(InvalidParameters):
            VerifyConfig(**kwargs)

    def test_set_unknown_option(self):
        with pytest.raises(InvalidParameters):
            VerifyConfig().set_option("bogus", 1)
