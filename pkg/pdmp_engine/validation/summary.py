"""
Monte Carlo estimates and experiment summary records.
"""

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import EmptyInputError

logger = logging.getLogger(__name__)

SUMMARY_SCHEMA = 1


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean with its standard error."""

    mean: float
    std_error: float
    n: int

    def within(self, reference: float, band: float = 3.0) -> bool:
        """True when |mean - reference| <= band standard errors (exact match when the error is 0)."""
        return abs(self.mean - reference) <= band * self.std_error + 1e-12 * max(1.0, abs(reference))

    def __str__(self) -> str:
        return f"{self.mean:.6g} +/- {self.std_error:.2g} (n={self.n})"


def estimate_from_samples(samples: Sequence[float]) -> MonteCarloEstimate:
    """
    Mean and standard error with compensated summation.

    A single sample yields a zero standard error.
    """
    values = np.asarray(samples, dtype=float)
    n = len(values)
    if n == 0:
        raise EmptyInputError("cannot estimate from an empty sample")
    mean = math.fsum(values) / n
    if n == 1:
        return MonteCarloEstimate(mean, 0.0, 1)
    variance = math.fsum((values - mean) ** 2) / (n - 1)
    return MonteCarloEstimate(mean, math.sqrt(variance / n), n)


@dataclass
class EstimatorSummary:
    """One estimator reported by an experiment."""

    name: str
    value: float
    std_error: float
    reference: Optional[float] = None
    passed: Optional[bool] = None


@dataclass
class ExperimentSummary:
    """Everything summary.json records about one experiment."""

    config_digest: str
    n_replicas: int
    estimators: List[EstimatorSummary] = field(default_factory=list)
    resolved_config: Dict = field(default_factory=dict)
    schema: int = SUMMARY_SCHEMA

    @property
    def passed(self) -> bool:
        return all(e.passed is not False for e in self.estimators)

    def estimator(self, name: str) -> EstimatorSummary:
        for entry in self.estimators:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> Dict:
        return {
            "schema": self.schema,
            "config_digest": self.config_digest,
            "n_replicas": self.n_replicas,
            "estimators": [asdict(e) for e in self.estimators],
            "resolved_config": self.resolved_config,
        }

    def write(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info("wrote summary %s", path)
        return path

    @classmethod
    def from_dict(cls, data: Dict) -> "ExperimentSummary":
        return cls(
            config_digest=data["config_digest"],
            n_replicas=int(data["n_replicas"]),
            estimators=[EstimatorSummary(**e) for e in data.get("estimators", [])],
            resolved_config=data.get("resolved_config", {}),
            schema=int(data.get("schema", SUMMARY_SCHEMA)),
        )

    @classmethod
    def load(cls, path: Path) -> "ExperimentSummary":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def config_digest(resolved_config: Dict) -> str:
    """sha256 of the canonical JSON form of a resolved config."""
    canonical = json.dumps(resolved_config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
