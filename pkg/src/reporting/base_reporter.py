"""
Base reporter class that all other reporters inherit from.
"""
import logging
import math
import os
from abc import ABC, abstractmethod
from typing import Optional, Union

from src.core.oentropy import EntropyReport
from src.reporting.report_config import ReportConfig
from src.verification.verifier import VerificationSummary

INF_TOKEN = "inf"


class BaseReporter(ABC):
    """Base reporter class that provides common functionality."""

    def __init__(self, config: Optional[ReportConfig] = None):
        self.logger = logging.getLogger(self.__class__.__name__)
        self._config = config or ReportConfig()

    @property
    def config(self) -> ReportConfig:
        return self._config

    @config.setter
    def config(self, value: ReportConfig) -> None:
        """Replace the configuration object.

        Raises:
            TypeError: If value is not a ReportConfig.
        """
        if not isinstance(value, ReportConfig):
            raise TypeError(f"Configuration must be a ReportConfig object, got {type(value).__name__}")
        self._config = value
        self.logger.debug("Updated configuration object")

    @property
    def units(self) -> str:
        return "bits" if self._config.get_option("bits") else "nats"

    def to_units(self, value: Optional[float]) -> Optional[float]:
        """Convert a value in nats to the display unit."""
        if value is None or math.isinf(value) or not self._config.get_option("bits"):
            return value
        return value / math.log(2)

    @staticmethod
    def encode_extended(value: Optional[float]) -> Union[float, str, None]:
        """Finite values stay numbers, ``inf`` becomes the string ``"inf"``."""
        if value is None:
            return None
        if math.isinf(value):
            return INF_TOKEN
        return float(value)

    @abstractmethod
    def render_report(self, report: EntropyReport, name: str) -> str:
        """Render an entropy report of the named scenario."""

    @abstractmethod
    def render_summary(self, summary: VerificationSummary) -> str:
        """Render a verification summary."""

    def write(self, text: str, path: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        self.logger.info(f"Wrote {path}")
