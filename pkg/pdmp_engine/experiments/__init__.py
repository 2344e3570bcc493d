"""
Experiment driver: replica pool, runner and plot data.
"""

from .replica_pool import PoolStats, ReplicaTask, run_replicas, simulate_replica
from .runner import run_experiment, run_sweep, sweep_directory_name
from .plot_data import emit_plot_data, render_plot

__all__ = [
    "PoolStats",
    "ReplicaTask",
    "run_replicas",
    "simulate_replica",
    "run_experiment",
    "run_sweep",
    "sweep_directory_name",
    "emit_plot_data",
    "render_plot",
]
