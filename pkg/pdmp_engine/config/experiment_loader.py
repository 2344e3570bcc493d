"""
Experiment config loader.
Parses versioned JSON experiment files, applies presets, flag overrides and
the PDMP_SEED environment variable, and resolves everything into an
ExperimentConfig.

Example file:
    {
      "schema": 1,
      "process": "constrained",
      "generator": {"speeds": [1, 4], "q": [[-1, 1], [2, -2]]},
      "boundary": 1.0,
      "initial": {"kind": "dirac", "a": 0.0},
      "kernels": {"1": {"kind": "dirac", "a": 0.0}, "4": {"kind": "dirac", "a": 0.5}},
      "epsilon": 0.001,
      "horizon": 0.7,
      "rho": 0.5,
      "replicas": 1000,
      "seed": 7
    }
"""

import json
import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Tuple

from ..algebra.generator import generator_from_dict
from ..algebra.kernels import kernel_from_dict
from ..errors import ConfigError
from ..flows.homeomorphism import FlowSpec, table_flow
from ..flows.reduction import quadratic_if_preset
from ..processes.process_config import ProcessConfig
from ..validation.limit_law import LimitLawQuery
from .simulation_config import PRESET_CONFIG, SIMULATION_CONFIG

logger = logging.getLogger(__name__)

PROCESS_KINDS = ("constrained", "penalized", "averaged", "mirror", "flow", "coupled")
SWEEP_PARAMETERS = ("epsilon", "k")
OUTPUT_FORMATS = ("csv", "json")
SEED_ENV_VAR = "PDMP_SEED"

PROCESS_FIELDS = (
    "generator", "boundary", "initial", "kernels", "epsilon", "horizon", "rho", "initial_speed", "flow",
)
RUN_FIELDS = (
    "process", "k", "x_horizon", "replicas", "seed", "workers", "out", "format", "require_pass",
    "sweep", "limit_law",
)
KNOWN_KEYS = {"schema", "preset"} | set(PROCESS_FIELDS) | set(RUN_FIELDS)

PRESET_BUILDERS: Dict[str, Callable[[], ProcessConfig]] = {
    "quadratic-if": quadratic_if_preset,
}
PRESET_PROCESS = {
    "quadratic-if": "flow",
}


@dataclass(frozen=True)
class SweepSpec:
    """One parameter swept over a list of values."""

    parameter: str
    values: Tuple[float, ...]


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved experiment: what to simulate, how many times, where to write."""

    process: str
    process_config: ProcessConfig
    k: int
    x_horizon: float
    replicas: int
    seed: int
    workers: int
    out: Path
    format: str
    require_pass: bool
    sweep: Optional[SweepSpec]
    limit_law: Optional[LimitLawQuery]
    # Re-loadable document with every default filled in
    resolved: Dict

    def at_sweep_value(self, value: float) -> "ExperimentConfig":
        """The single experiment of one sweep point."""
        if self.sweep is None:
            raise ConfigError("experiment has no sweep")
        document = dict(self.resolved)
        document["sweep"] = None
        document[self.sweep.parameter] = value
        return resolve_experiment(document, environ={})


def read_experiment_file(path) -> Dict:
    """
    Read an experiment JSON file.

    Raises:
        ConfigError: missing file, malformed JSON (with line and column) or a non-object document
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"experiment config not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return document


def preset_document(name: str) -> Dict:
    """Experiment document of a named preset, ready to be written out or extended."""
    if name not in PRESET_BUILDERS or name not in PRESET_CONFIG:
        raise ConfigError(f"unknown preset {name!r}; known presets: {sorted(PRESET_BUILDERS)}")
    document = {"schema": SIMULATION_CONFIG["schema_version"], "process": PRESET_PROCESS[name]}
    document.update(PRESET_BUILDERS[name]().to_dict())
    return document


def flow_from_dict(data: Mapping) -> FlowSpec:
    """FlowSpec from {"m", "c", "alpha": {speed: alpha}, "family"}; family defaults to quadratic."""
    family = data.get("family", "quadratic")
    alpha = {float(y): float(a) for y, a in data["alpha"].items()}
    m, c = float(data["m"]), float(data["c"])
    if family == "quadratic":
        return FlowSpec(m=m, c=c, alpha=alpha)
    return table_flow(family, m, c, alpha)


def process_config_from_dict(data: Mapping) -> ProcessConfig:
    """
    Build a ProcessConfig from the process fields of an experiment document.

    Raises:
        ConfigError: missing field, wrong type, or a violated process invariant
    """
    missing = [key for key in ("generator", "boundary", "initial", "kernels") if data.get(key) is None]
    if missing:
        raise ConfigError(f"experiment config is missing {missing}")
    try:
        flow = flow_from_dict(data["flow"]) if data.get("flow") is not None else None
        initial_speed = data.get("initial_speed")
        return ProcessConfig(
            generator=generator_from_dict(data["generator"]),
            boundary=float(data["boundary"]),
            initial=kernel_from_dict(data["initial"]),
            kernels={float(y): kernel_from_dict(k) for y, k in data["kernels"].items()},
            epsilon=float(data["epsilon"]),
            horizon=float(data["horizon"]),
            rho=float(data["rho"]),
            initial_speed=None if initial_speed is None else _integer(initial_speed, "initial_speed", 0),
            flow=flow,
        )
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"experiment config is missing {exc}") from exc
    except (AttributeError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid process description: {exc}") from exc


def _integer(value, name: str, minimum: int) -> int:
    if (
        isinstance(value, bool) or not isinstance(value, (int, float))
        or not math.isfinite(value) or int(value) != value
    ):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value!r}")
    return int(value)


def _positive_float(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def _parse_sweep(data) -> Optional[SweepSpec]:
    if data is None:
        return None
    if not isinstance(data, dict) or "parameter" not in data or "values" not in data:
        raise ConfigError(f"sweep must be an object with 'parameter' and 'values', got {data!r}")
    parameter = data["parameter"]
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"cannot sweep {parameter!r}; sweepable parameters: {list(SWEEP_PARAMETERS)}")
    values = data["values"]
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep values must be a non-empty list")
    if parameter == "epsilon":
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 < v <= 1.0:
                raise ConfigError(f"sweep value epsilon={v!r} is outside (0, 1]")
        return SweepSpec(parameter, tuple(float(v) for v in values))
    return SweepSpec(parameter, tuple(_integer(v, "sweep value k", 1) for v in values))


def _parse_limit_law(data, horizon: float) -> Optional[LimitLawQuery]:
    if data is None:
        return None
    try:
        times, speeds = list(data["times"]), list(data["speeds"])
        return LimitLawQuery(tuple(times), tuple(speeds), len(times), horizon)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid limit_law query {data!r}: {exc}") from exc


def _seed_from_environ(environ: Mapping[str, str]) -> Optional[int]:
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from exc


def resolve_experiment(
    document: Mapping,
    preset: Optional[str] = None,
    overrides: Optional[Mapping] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """
    Resolve an experiment document into an ExperimentConfig.

    Precedence, lowest first: built-in defaults, preset, document, flag
    overrides (None values are ignored), then PDMP_SEED for the seed.

    Raises:
        ConfigError: schema violation of any kind
    """
    environ = os.environ if environ is None else environ
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}

    schema = document.get("schema", SIMULATION_CONFIG["schema_version"])
    if schema != SIMULATION_CONFIG["schema_version"]:
        raise ConfigError(f"unsupported schema {schema!r}; expected {SIMULATION_CONFIG['schema_version']}")
    unknown = sorted(set(document) - KNOWN_KEYS) + sorted(set(overrides) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}")

    merged: Dict = dict(SIMULATION_CONFIG["experiment_defaults"])
    merged["sweep"] = None
    merged["limit_law"] = None
    preset = overrides.pop("preset", None) or preset or document.get("preset")
    if preset is not None:
        merged.update(preset_document(preset))
    merged.update({key: value for key, value in document.items() if key != "preset"})
    merged.update(overrides)
    seed_override = _seed_from_environ(environ)
    if seed_override is not None:
        merged["seed"] = seed_override

    process = merged["process"]
    if process not in PROCESS_KINDS:
        raise ConfigError(f"unknown process {process!r}; known: {list(PROCESS_KINDS)}")
    if merged["format"] not in OUTPUT_FORMATS:
        raise ConfigError(f"unknown format {merged['format']!r}; known: {list(OUTPUT_FORMATS)}")
    if not isinstance(merged["require_pass"], bool):
        raise ConfigError(f"require_pass must be true or false, got {merged['require_pass']!r}")

    cfg = process_config_from_dict(merged)
    if process == "flow" and cfg.flow is None:
        raise ConfigError("process 'flow' needs a 'flow' description")

    seed = _integer(merged["seed"], "seed", 0)
    resolved = {key: merged[key] for key in RUN_FIELDS}
    resolved.update(cfg.to_dict())
    resolved["schema"] = SIMULATION_CONFIG["schema_version"]
    resolved["out"] = str(merged["out"])
    resolved["seed"] = seed

    experiment = ExperimentConfig(
        process=process,
        process_config=cfg,
        k=_integer(merged["k"], "k", 1),
        x_horizon=_positive_float(merged["x_horizon"], "x_horizon"),
        replicas=_integer(merged["replicas"], "replicas", 1),
        seed=seed,
        workers=_integer(merged["workers"], "workers", 1),
        out=Path(merged["out"]),
        format=merged["format"],
        require_pass=merged["require_pass"],
        sweep=_parse_sweep(merged["sweep"]),
        limit_law=_parse_limit_law(merged["limit_law"], cfg.horizon),
        # Plain JSON types only, so the digest is stable
        resolved=json.loads(json.dumps(resolved)),
    )
    logger.debug("resolved %s experiment: %d replicas, seed %d", process, experiment.replicas, experiment.seed)
    return experiment


def load_experiment(
    path=None,
    preset: Optional[str] = None,
    overrides: Optional[Mapping] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """Read an experiment file (or start empty) and resolve it."""
    document = read_experiment_file(path) if path is not None else {}
    return resolve_experiment(document, preset=preset, overrides=overrides, environ=environ)
