"""
Seeded verification sweeps over random instances.

The trial plan enumerates ``regime x dims x trials`` in configuration order and
gives every trial a global index ``i``; trial ``i`` draws from
``default_rng(seed XOR i)`` only. Workers run trials independently and results
are merged in trial order, so the summary does not depend on ``workers``.
"""
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.core.errors import QOEntropyError
from src.scenarios.random_instances import random_instance, trial_rng
from src.scenarios.scenario import Scenario
from src.scenarios.scenario_parser import save_scenario
from .property_suite import PROPERTIES, properties_for
from .verify_config import VerifyConfig

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TrialSpec:
    index: int
    regime: str
    d: int
    m: int
    seed: int
    postprocessings: int


@dataclass(frozen=True)
class PropertyResult:
    name: str
    residual: Optional[float]
    passed: bool
    detail: str = ""


@dataclass
class TrialResult:
    spec: TrialSpec
    scenario: Scenario
    results: List[PropertyResult] = field(default_factory=list)


def run_trial(spec: TrialSpec) -> TrialResult:
    """Generate one instance and evaluate every property of its regime."""
    logger = logging.getLogger(__name__)
    rng = trial_rng(spec.seed, spec.index)
    scenario = random_instance(spec.d, spec.m, spec.regime, rng,
                               name=f"trial{spec.index:05d}-{spec.regime}-d{spec.d}-m{spec.m}")
    trial = TrialResult(spec=spec, scenario=scenario)
    for prop in properties_for(spec.regime):
        try:
            residual = prop.check(scenario, rng, spec.postprocessings)
        except QOEntropyError as e:
            logger.warning(f"{scenario.name}: property '{prop.name}' raised {e.__class__.__name__}: {e}")
            trial.results.append(PropertyResult(prop.name, math.inf, False, f"{e.__class__.__name__}: {e}"))
            continue
        if residual is None:
            trial.results.append(PropertyResult(prop.name, None, True, "not applicable"))
            continue
        residual = float(residual)
        trial.results.append(PropertyResult(prop.name, residual, residual <= prop.threshold))
    return trial


@dataclass
class PropertyTally:
    contracted: bool
    threshold: float
    evaluated: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    max_residual: Optional[float] = None

    def add(self, result: PropertyResult) -> None:
        if result.residual is None:
            self.skipped += 1
            return
        self.evaluated += 1
        if result.passed:
            self.passed += 1
        else:
            self.failed += 1
        if self.max_residual is None or result.residual > self.max_residual:
            self.max_residual = result.residual

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contracted": self.contracted,
            "threshold": self.threshold,
            "evaluated": self.evaluated,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "max_residual": self.max_residual,
        }


@dataclass
class VerificationSummary:
    config: Dict[str, Any]
    trials: int
    properties: Dict[str, PropertyTally]
    failures: List[Dict[str, Any]]
    diagnostics: Dict[str, int]

    @property
    def passed(self) -> bool:
        return not self.failures

    def contracted_failures(self) -> int:
        return sum(t.failed for t in self.properties.values() if t.contracted)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "verify",
            "status": "pass" if self.passed else "fail",
            "config": self.config,
            "trials": self.trials,
            "properties": {name: tally.to_dict() for name, tally in self.properties.items()},
            "failures": self.failures,
            "diagnostics": self.diagnostics,
        }


class Verifier:
    """Runs a :class:`VerifyConfig` sweep and aggregates the results."""

    def __init__(self, config: Optional[VerifyConfig] = None):
        self.config = config or VerifyConfig()
        self.logger = logging.getLogger(self.__class__.__name__)

    def plan(self) -> List[TrialSpec]:
        options = self.config.get_all_options()
        specs = []
        for regime in options["regimes"]:
            for d, m in options["dims"]:
                for _ in range(options["trials"]):
                    specs.append(TrialSpec(len(specs), regime, d, m, options["seed"], options["postprocessings"]))
        return specs

    def _execute(self, specs: List[TrialSpec]) -> List[TrialResult]:
        workers = self.config.get_option("workers")
        if workers == 1:
            return [run_trial(spec) for spec in specs]
        self.logger.info(f"Running {len(specs)} trials on {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order
            return list(pool.map(run_trial, specs, chunksize=max(1, len(specs) // (4 * workers))))

    def _dump(self, scenario: Scenario) -> Optional[str]:
        directory = self.config.get_option("counterexample_dir")
        if directory is None:
            return None
        path = os.path.join(directory, f"{scenario.name}.json")
        save_scenario(scenario, path)
        self.logger.info(f"Counterexample written to {path}")
        return path

    def run(self) -> VerificationSummary:
        specs = self.plan()
        self.logger.info(f"Verification sweep: {len(specs)} trials, seed {self.config.get_option('seed')}")
        tallies = {p.name: PropertyTally(contracted=p.contracted, threshold=p.threshold) for p in PROPERTIES}
        contracted = {p.name: p.contracted for p in PROPERTIES}
        failures = []
        diagnostics = {"s2_monotonicity_decreases": 0}

        for trial in self._execute(specs):
            failed = []
            for result in trial.results:
                tallies[result.name].add(result)
                if result.passed:
                    continue
                if contracted[result.name]:
                    failed.append(result)
                elif result.name == "s2_monotonicity_search":
                    diagnostics["s2_monotonicity_decreases"] += 1
            if not failed:
                continue
            dump = self._dump(trial.scenario)
            for result in failed:
                self.logger.warning(
                    f"{trial.scenario.name}: '{result.name}' failed with residual {result.residual}"
                )
                failures.append({
                    "trial": trial.spec.index,
                    "scenario": trial.scenario.name,
                    "property": result.name,
                    "residual": result.residual,
                    "detail": result.detail,
                    "dump": dump,
                })

        summary = VerificationSummary(
            config={key: value for key, value in self.config.to_dict().items() if key != "workers"},
            trials=len(specs),
            properties=tallies,
            failures=failures,
            diagnostics=diagnostics,
        )
        self.logger.info(
            f"Verification {'passed' if summary.passed else 'failed'}: "
            f"{summary.contracted_failures()} contracted failure(s), "
            f"{diagnostics['s2_monotonicity_decreases']} S2 decrease(s) found"
        )
        return summary


def verify(config: VerifyConfig) -> VerificationSummary:
    return Verifier(config).run()
