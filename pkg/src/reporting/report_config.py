"""
Configuration class for report rendering options.
"""
import logging
from typing import Any, Dict, Optional

from src.core.errors import InvalidParameters


class ReportConfig:
    """Configuration class for report rendering options."""

    DEFAULT_OPTIONS = {
        # display entropies in bits instead of nats (text output only)
        "bits": False,
        # significant digits in text tables
        "precision": 10,
        # JSON indentation
        "indent": 2,
    }

    def __init__(self, **kwargs) -> None:
        """Initialize the configuration with default values and any overrides.

        Raises:
            InvalidParameters: If any of the provided options are not recognized or invalid.
        """
        self._options = self.DEFAULT_OPTIONS.copy()
        self.logger = logging.getLogger(self.__class__.__name__)
        if kwargs:
            self.update_options(**kwargs)

    def update_options(self, **kwargs) -> None:
        """Update multiple rendering options at once.

        Args:
            **kwargs: Keyword arguments with option names and values.

        Raises:
            InvalidParameters: If any of the provided options are not recognized or invalid.
        """
        invalid_options = [key for key in kwargs if key not in self._options]
        if invalid_options:
            raise InvalidParameters(f"Unknown report options: {', '.join(invalid_options)}")
        for key, value in kwargs.items():
            self._validate_option_value(key, value)
            self._options[key] = value
            self.logger.debug(f"Updated option '{key}' to {value}")

    def set_option(self, name: str, value: Any) -> None:
        """Set a single rendering option.

        Args:
            name: The name of the option to set.
            value: The new value for the option.

        Raises:
            InvalidParameters: If the option name is not recognized or the value is invalid.
        """
        if name not in self._options:
            raise InvalidParameters(f"Unknown report option: {name}")
        self._validate_option_value(name, value)
        self._options[name] = value
        self.logger.debug(f"Set option '{name}' to {value}")

    def get_option(self, name: str, default: Optional[Any] = None) -> Any:
        """Get the value of a rendering option.

        Args:
            name: The name of the option to get.
            default: The default value to return if the option is not found.

        Returns:
            The value of the option, or the default if not found.
        """
        return self._options.get(name, default)

    def get_all_options(self) -> Dict[str, Any]:
        return self._options.copy()

    def _validate_option_value(self, name: str, value: Any) -> None:
        """Check the type and range of an option value.

        Raises:
            InvalidParameters: If the value is invalid for the option.
        """
        if name == "bits":
            if not isinstance(value, bool):
                raise InvalidParameters(f"Option 'bits' must be a boolean, got {type(value).__name__}")
            return
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidParameters(f"Option '{name}' must be an integer, got {type(value).__name__}")
        if name == "precision" and not 1 <= value <= 17:
            raise InvalidParameters(f"Option 'precision' must lie in [1, 17], got {value}")
        if name == "indent" and value < 0:
            raise InvalidParameters(f"Option 'indent' must be non-negative, got {value}")
