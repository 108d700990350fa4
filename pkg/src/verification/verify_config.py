"""
Configuration class for verification sweeps.
"""
import logging
from typing import Any, Dict, Optional

from src.core.errors import InvalidParameters
from src.scenarios.random_instances import REGIMES

MAX_SEED = 2 ** 64 - 1


class VerifyConfig:
    """Options of a seeded verification sweep."""

    DEFAULT_OPTIONS = {
        "seed": 42,
        "trials": 50,
        "dims": [(3, 2), (4, 4)],
        "regimes": list(REGIMES),
        "workers": 1,
        "counterexample_dir": None,
        # random coarse-grainings tried per trial by the monotonicity checks
        "postprocessings": 3,
    }

    def __init__(self, **kwargs) -> None:
        """Initialize with default values and any overrides.

        Raises:
            InvalidParameters: If an option is unknown or has an invalid value.
        """
        self._options = {key: (list(value) if isinstance(value, list) else value)
                         for key, value in self.DEFAULT_OPTIONS.items()}
        self.logger = logging.getLogger(self.__class__.__name__)
        if kwargs:
            self.update_options(**kwargs)

    def update_options(self, **kwargs) -> None:
        """Update several sweep options at once.

        Args:
            **kwargs: Option names and their new values.

        Raises:
            InvalidParameters: If an option is unknown or a value fails validation.
        """
        invalid_options = [key for key in kwargs if key not in self._options]
        if invalid_options:
            raise InvalidParameters(f"Unknown verification options: {', '.join(invalid_options)}")
        for key, value in kwargs.items():
            self._options[key] = self._validate_option_value(key, value)
            self.logger.debug(f"Updated option '{key}' to {self._options[key]}")

    def set_option(self, name: str, value: Any) -> None:
        """Set a single sweep option.

        Args:
            name: The option to set.
            value: Its new value; list and tuple dimension pairs are normalized to tuples.

        Raises:
            InvalidParameters: If the option is unknown or the value fails validation.
        """
        if name not in self._options:
            raise InvalidParameters(f"Unknown verification option: {name}")
        self._options[name] = self._validate_option_value(name, value)
        self.logger.debug(f"Set option '{name}' to {self._options[name]}")

    def get_option(self, name: str, default: Optional[Any] = None) -> Any:
        """Get the value of a sweep option.

        Args:
            name: The option to look up.
            default: Returned when the option does not exist.

        Returns:
            The option value, or ``default``.
        """
        return self._options.get(name, default)

    def get_all_options(self) -> Dict[str, Any]:
        """Copy of all options; list values are copied too."""
        options = self._options.copy()
        options["dims"] = list(options["dims"])
        options["regimes"] = list(options["regimes"])
        return options

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view; ``dims`` become ``[d, m]`` lists."""
        options = self.get_all_options()
        options["dims"] = [list(pair) for pair in options["dims"]]
        return options

    def _validate_option_value(self, name: str, value: Any) -> Any:
        """Check an option value and return it in canonical form.

        Raises:
            InvalidParameters: If the value has the wrong type or range.
        """
        if name in ("seed", "trials", "workers", "postprocessings"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidParameters(f"Option '{name}' must be an integer, got {type(value).__name__}")
            if name == "seed" and not 0 <= value <= MAX_SEED:
                raise InvalidParameters(f"Option 'seed' must be a 64-bit unsigned integer, got {value}")
            if name != "seed" and value < 1:
                raise InvalidParameters(f"Option '{name}' must be at least 1, got {value}")
            return value

        if name == "dims":
            if not isinstance(value, (list, tuple)) or not value:
                raise InvalidParameters("Option 'dims' must be a non-empty list of (d, m) pairs")
            pairs = []
            for pair in value:
                if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                        or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
                    raise InvalidParameters(f"Dimension pair must be two integers, got {pair!r}")
                d, m = pair
                if d < 1 or m < 1:
                    raise InvalidParameters(f"Dimensions must be positive, got d={d}, m={m}")
                pairs.append((d, m))
            return pairs

        if name == "regimes":
            if not isinstance(value, (list, tuple)) or not value:
                raise InvalidParameters("Option 'regimes' must be a non-empty list")
            unknown = [r for r in value if r not in REGIMES]
            if unknown:
                raise InvalidParameters(f"Unknown regimes: {', '.join(map(str, unknown))}")
            # canonical order keeps the trial plan independent of how regimes were listed
            return [r for r in REGIMES if r in value]

        if name == "counterexample_dir":
            if value is not None and (not isinstance(value, str) or not value):
                raise InvalidParameters("Option 'counterexample_dir' must be a non-empty path or None")
            return value

        return value
