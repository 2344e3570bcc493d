"""
Experiment runner.
Simulates the replicas of an ExperimentConfig, evaluates the estimators of
its process kind, and writes hits, coupling, path, switching and summary artifacts.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd

from ..algebra.generator import averaged_drift, pistar_first_moment
from ..config.experiment_loader import ExperimentConfig
from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import ValidationFailureError
from ..flows.reduction import reduce_to_linear
from ..penalty.time_change import time_change
from ..processes.export import hits_to_dataframe, path_to_dataframe, write_table
from ..processes.paths import CadlagPath
from ..processes.process_config import ProcessConfig
from ..validation.estimators import drift_estimate, pre_boundary_window, prejump_speed_tv
from ..validation.limit_law import limit_law_estimate, limit_law_probability
from ..validation.summary import (
    EstimatorSummary,
    ExperimentSummary,
    MonteCarloEstimate,
    config_digest,
    estimate_from_samples,
)
from .plot_data import emit_plot_data
from .replica_pool import run_replicas

logger = logging.getLogger(__name__)

OUTPUT = SIMULATION_CONFIG["output"]
BAND = SIMULATION_CONFIG["acceptance"]["std_error_band"]

COUPLING_COLUMNS = [
    "replica", "k", "epsilon", "n_jumps_x", "n_jumps_xp",
    "coupling_broken", "sup_dist_after_warp", "lambda_sup_dev",
]


def _entry(name: str, estimate: MonteCarloEstimate, reference: Optional[float] = None) -> EstimatorSummary:
    passed = None if reference is None else estimate.within(reference, BAND)
    return EstimatorSummary(name, estimate.mean, estimate.std_error, reference, passed)


def _boundary_estimators(paths: Sequence[CadlagPath], cfg: ProcessConfig) -> List[EstimatorSummary]:
    """Pre-jump speed TV, jump count and pre-boundary slope of paths of cfg."""
    entries = []
    records = [record for path in paths for record in path.jumps]
    if records:
        tv, se = prejump_speed_tv(records, cfg.generator)
        entries.append(EstimatorSummary("prejump_speed_tv", tv, se, 0.0, tv <= BAND * se))
    else:
        logger.warning("no boundary hits in any replica; prejump_speed_tv is not reported")
    entries.append(_entry("mean_jump_count", estimate_from_samples([p.n_jumps for p in paths])))
    entries.append(_entry(
        "mean_slope",
        drift_estimate(paths, pre_boundary_window(cfg)),
        averaged_drift(cfg.generator),
    ))
    return entries


def _limit_law_entry(experiment: ExperimentConfig, paths: Sequence[CadlagPath]) -> List[EstimatorSummary]:
    if experiment.limit_law is None:
        return []
    cfg = experiment.process_config
    reference = limit_law_probability(cfg.generator, cfg.boundary, cfg.initial, cfg.kernels, experiment.limit_law)
    return [_entry("limit_law", limit_law_estimate(paths, experiment.limit_law), reference)]


def _path_estimators(experiment: ExperimentConfig, results: Sequence) -> List[EstimatorSummary]:
    return _boundary_estimators(results, experiment.process_config) + _limit_law_entry(experiment, results)


def _penalized_estimators(experiment: ExperimentConfig, results: Sequence) -> List[EstimatorSummary]:
    cfg = experiment.process_config
    deviations = [time_change(p, cfg.epsilon, experiment.k).sup_deviation() for p in results]
    return _boundary_estimators(results, cfg) + [_entry("lambda_sup_dev", estimate_from_samples(deviations))]


def _flow_estimators(experiment: ExperimentConfig, results: Sequence) -> List[EstimatorSummary]:
    # Checked in Z = G(X), where the reduced process is piecewise linear
    return _boundary_estimators([r.z_path for r in results], reduce_to_linear(experiment.process_config))


def _coupled_estimators(experiment: ExperimentConfig, results: Sequence) -> List[EstimatorSummary]:
    return [
        _entry("sup_dist_after_warp", estimate_from_samples([p.sup_distance_after_warp() for p in results])),
        _entry("coupling_broken_rate", estimate_from_samples([float(p.any_broken) for p in results])),
    ]


def _mirror_estimators(experiment: ExperimentConfig, results: Sequence) -> List[EstimatorSummary]:
    slopes = [float(p.x_end[-1]) / p.horizon for p in results]
    return [_entry("mirror_slope", estimate_from_samples(slopes), pistar_first_moment(experiment.process_config.generator))]


ESTIMATORS: Dict[str, Callable[[ExperimentConfig, Sequence], List[EstimatorSummary]]] = {
    "constrained": _path_estimators,
    "averaged": _path_estimators,
    "penalized": _penalized_estimators,
    "flow": _flow_estimators,
    "coupled": _coupled_estimators,
    "mirror": _mirror_estimators,
}


def _write_artifacts(experiment: ExperimentConfig, results: Sequence, out_dir: Path) -> None:
    fmt = experiment.format
    process = experiment.process
    first = results[0]

    if process == "coupled":
        write_table(hits_to_dataframe(enumerate(p.x for p in results)), out_dir, OUTPUT["hits_file"], fmt)
        coupling = pd.DataFrame([p.report_row(r) for r, p in enumerate(results)], columns=COUPLING_COLUMNS)
        write_table(coupling, out_dir, OUTPUT["coupling_file"], fmt)
        path, path_frame = first.x, path_to_dataframe(first.x)
    elif process == "flow":
        # FlowPath.jumps are already in x-coordinates
        write_table(hits_to_dataframe(enumerate(results)), out_dir, OUTPUT["hits_file"], fmt)
        path, path_frame = first.z_path, path_to_dataframe(first.z_path, transform=first.scalar_x)
    else:
        if process != "mirror":
            write_table(hits_to_dataframe(enumerate(results)), out_dir, OUTPUT["hits_file"], fmt)
        path, path_frame = first, path_to_dataframe(first)
    write_table(path_frame, out_dir, OUTPUT["path_file"], fmt)
    # The averaged process has no switching realization
    if path.switching is not None:
        write_table(path.switching.to_frame(), out_dir, OUTPUT["switching_file"], fmt)


def run_experiment(experiment: ExperimentConfig, out_dir: Optional[Path] = None) -> ExperimentSummary:
    """
    Run one experiment (no sweep) and write its artifacts.

    Args:
        experiment: Resolved experiment
        out_dir: Artifact directory; defaults to experiment.out

    Returns:
        The summary also written to summary.json

    Raises:
        ValidationFailureError: when require_pass is set and an estimator misses its reference
    """
    out_dir = Path(out_dir) if out_dir is not None else experiment.out
    cfg = experiment.process_config
    logger.info(
        "running %s experiment: eps=%g, T=%g, %d replicas, seed %d",
        experiment.process, cfg.epsilon, cfg.horizon, experiment.replicas, experiment.seed,
    )
    results = run_replicas(
        experiment.process, cfg, experiment.replicas, experiment.seed,
        workers=experiment.workers, k=experiment.k, x_horizon=experiment.x_horizon,
    )
    summary = ExperimentSummary(
        config_digest=config_digest(experiment.resolved),
        n_replicas=experiment.replicas,
        estimators=ESTIMATORS[experiment.process](experiment, results),
        resolved_config=experiment.resolved,
    )
    _write_artifacts(experiment, results, out_dir)
    summary.write(out_dir / OUTPUT["summary_file"])

    for entry in summary.estimators:
        logger.info("%s = %.6g +/- %.2g (reference %s)", entry.name, entry.value, entry.std_error, entry.reference)
    failed = [e.name for e in summary.estimators if e.passed is False]
    if failed:
        if experiment.require_pass:
            raise ValidationFailureError(f"acceptance checks failed: {failed}")
        logger.warning("acceptance checks failed: %s", failed)
    return summary


def sweep_directory_name(parameter: str, value: float) -> str:
    """Sub-directory of one sweep point, e.g. epsilon_0.001 or k_3."""
    return f"{parameter}_{value:g}" if parameter == "epsilon" else f"{parameter}_{int(value)}"


def run_sweep(experiment: ExperimentConfig) -> List[ExperimentSummary]:
    """
    Run every point of the experiment's sweep into its own sub-directory,
    then write the long-format plot data of the whole sweep.

    Raises:
        ValidationFailureError: after all points ran, when require_pass is set and any point failed
    """
    if experiment.sweep is None:
        return [run_experiment(experiment)]
    parameter = experiment.sweep.parameter
    summaries, summary_files, failures = [], [], []
    for value in experiment.sweep.values:
        point = experiment.at_sweep_value(value)
        point_dir = experiment.out / sweep_directory_name(parameter, value)
        try:
            summaries.append(run_experiment(point, out_dir=point_dir))
        except ValidationFailureError as exc:
            failures.append(f"{parameter}={value:g}: {exc}")
            summaries.append(ExperimentSummary.load(point_dir / OUTPUT["summary_file"]))
        summary_files.append(point_dir / OUTPUT["summary_file"])

    emit_plot_data(summary_files, parameter, experiment.out / OUTPUT["plot_file"])
    if failures:
        raise ValidationFailureError("; ".join(failures))
    return summaries

