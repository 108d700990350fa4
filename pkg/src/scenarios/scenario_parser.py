"""
Reading and writing scenario files.

A scenario file is a JSON object::

    {
      "name": "gibbs-d4",
      "rho":   [[[re, im], ...], ...],
      "gamma": [[[re, im], ...], ...],
      "povm":  [matrix, matrix, ...],
      "tolerance": {"eig_cut": 1e-12}
    }

Matrices are row-major lists of rows; every entry is an ``[re, im]`` pair
(plain numbers are accepted as real entries). ``tolerance`` is optional.
"""
import json
import logging
import os
import re
from typing import Any, Dict, Optional

import numpy as np

from src.core.errors import ParseError
from src.core.linop import Tolerance
from src.core.qstate import DensityOperator, Povm
from .scenario import Scenario

REQUIRED_FIELDS = ("rho", "gamma", "povm")


class ScenarioParser:
    """Parser for scenario JSON files.

    Field errors report the line on which the offending key appears so a
    malformed file can be fixed without a JSON viewer.
    """

    def __init__(self, scenario_path: str):
        self.scenario_path = scenario_path
        self.logger = logging.getLogger(self.__class__.__name__)
        self._text = ""

    def parse(self) -> Scenario:
        """Read, decode and validate the file.

        Raises:
            ParseError: If the file is missing, is not valid JSON or has malformed fields.
            ValidationError: If a decoded operator violates a type invariant.
        """
        try:
            with open(self.scenario_path, "r", encoding="utf-8") as f:
                self._text = f.read()
        except OSError as e:
            raise ParseError(f"Cannot read scenario file {self.scenario_path}: {e.strerror}") from e

        try:
            document = json.loads(self._text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno) from e

        if not isinstance(document, dict):
            raise ParseError("Scenario file must contain a JSON object", line=1)

        default_name = os.path.splitext(os.path.basename(self.scenario_path))[0]
        scenario = self.from_dict(document, default_name=default_name)
        self.logger.info(f"Loaded scenario '{scenario.name}' with dims {scenario.dims} from {self.scenario_path}")
        return scenario

    def from_dict(self, document: Dict[str, Any], default_name: str = "scenario") -> Scenario:
        missing = [key for key in REQUIRED_FIELDS if key not in document]
        if missing:
            raise ParseError(f"Missing required field(s): {', '.join(missing)}", field=missing[0])

        name = document.get("name", default_name)
        if not isinstance(name, str) or not name:
            raise ParseError("Scenario name must be a non-empty string", field="name", line=self._line_of("name"))

        tolerance = self._decode_tolerance(document.get("tolerance"))
        tol = tolerance or Tolerance()

        povm_entries = document["povm"]
        if not isinstance(povm_entries, list) or not povm_entries:
            raise ParseError("POVM must be a non-empty list of matrices", field="povm", line=self._line_of("povm"))
        effects = tuple(self._decode_matrix(entry, f"povm[{i}]") for i, entry in enumerate(povm_entries))

        return Scenario(
            name=name,
            rho=DensityOperator(self._decode_matrix(document["rho"], "rho"), tol=tol),
            gamma=DensityOperator(self._decode_matrix(document["gamma"], "gamma"), tol=tol),
            povm=Povm(effects, tol=tol),
            tolerance=tolerance,
        )

    def _line_of(self, key: str) -> Optional[int]:
        """1-based line of the first occurrence of ``"key"`` in the source text."""
        base = key.split("[")[0]
        match = re.search(f'"{re.escape(base)}"\\s*:', self._text)
        if match is None:
            return None
        return self._text.count("\n", 0, match.start()) + 1

    def _decode_entry(self, entry: Any, field: str) -> complex:
        if isinstance(entry, bool):
            raise ParseError(f"Matrix entry {entry!r} is not a number", field=field, line=self._line_of(field))
        if isinstance(entry, (int, float)):
            return complex(entry, 0.0)
        if (isinstance(entry, list) and len(entry) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
            return complex(entry[0], entry[1])
        raise ParseError(f"Matrix entry {entry!r} is not an [re, im] pair", field=field, line=self._line_of(field))

    def _decode_matrix(self, rows: Any, field: str) -> np.ndarray:
        if not isinstance(rows, list) or not rows or not all(isinstance(row, list) for row in rows):
            raise ParseError("Matrix must be a non-empty list of rows", field=field, line=self._line_of(field))
        size = len(rows)
        if any(len(row) != size for row in rows):
            raise ParseError(f"Matrix must be square, got {size} rows of lengths {[len(r) for r in rows]}",
                             field=field, line=self._line_of(field))
        return np.array([[self._decode_entry(x, field) for x in row] for row in rows], dtype=complex)

    def _decode_tolerance(self, value: Any) -> Optional[Tolerance]:
        if value is None:
            return None
        line = self._line_of("tolerance")
        if not isinstance(value, dict):
            raise ParseError("Tolerance must be an object", field="tolerance", line=line)
        try:
            return Tolerance().with_overrides(**value)
        except (TypeError, ValueError) as e:
            raise ParseError(str(e), field="tolerance", line=line) from e


def encode_matrix(mat) -> list:
    """Row-major ``[re, im]`` pairs."""
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(mat, dtype=complex)]


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    document = {
        "name": scenario.name,
        "rho": encode_matrix(scenario.rho.mat),
        "gamma": encode_matrix(scenario.gamma.mat),
        "povm": [encode_matrix(effect) for effect in scenario.povm.effects],
    }
    if scenario.tolerance is not None:
        document["tolerance"] = scenario.tolerance.to_dict()
    return document


def load_scenario(path: str) -> Scenario:
    """Load and validate a scenario file."""
    return ScenarioParser(path).parse()


def save_scenario(scenario: Scenario, path: str) -> None:
    """Write a scenario in the format read by :func:`load_scenario`."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(scenario_to_dict(scenario), f, indent=2)
        f.write("\n")
    logging.getLogger(__name__).debug(f"Saved scenario '{scenario.name}' to {path}")
