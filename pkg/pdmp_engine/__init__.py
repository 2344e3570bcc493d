"""
PDMP Engine - fast-switching piecewise deterministic Markov processes.

Exact event-driven simulation of processes that move at a speed set by a
fast continuous-time Markov chain and jump down when they hit a boundary,
together with the closed-form averaged limit they converge to.

Main Components:
    - algebra: Intensity matrices, invariant measures, jump kernels
    - switching: Counter-based random streams and the switching chain
    - processes: Constrained, averaged and mirror processes
    - penalty: Penalized relaxation, time changes, couplings, path distances
    - flows: Separated flows reduced to the piecewise-linear case
    - validation: Estimators and closed-form limit laws
    - experiments: Replica pool, experiment runner, plot data
"""

from .algebra import (
    SwitchingGenerator,
    ProbabilityVector,
    invariant_measure,
    tilted_generator,
    boundary_speed_measure,
    averaged_drift,
    averaged_jump_kernel,
    averaged_hitting_times,
    DiracKernel,
    UniformKernel,
    MixtureKernel,
)
from .switching import RngStream, simulate_switching
from .processes import (
    ProcessConfig,
    CadlagPath,
    simulate_constrained,
    simulate_averaged,
    simulate_mirror,
)
from .penalty import simulate_penalized, simulate_coupled, skorokhod_upper_bound
from .flows import FlowSpec, simulate_flow, quadratic_if_preset
from .validation import prejump_speed_tv, limit_law_probability
from .config import SIMULATION_CONFIG, PRESET_CONFIG
from .config.experiment_loader import ExperimentConfig, load_experiment
from .experiments import ReplicaTask, simulate_replica, run_experiment, run_sweep
from .errors import PDMPError


__version__ = "1.0.0"
__all__ = [
    # Algebra
    "SwitchingGenerator",
    "ProbabilityVector",
    "invariant_measure",
    "tilted_generator",
    "boundary_speed_measure",
    "averaged_drift",
    "averaged_jump_kernel",
    "averaged_hitting_times",
    "DiracKernel",
    "UniformKernel",
    "MixtureKernel",
    # Simulation
    "RngStream",
    "simulate_switching",
    "ProcessConfig",
    "CadlagPath",
    "simulate_constrained",
    "simulate_averaged",
    "simulate_mirror",
    "simulate_penalized",
    "simulate_coupled",
    "skorokhod_upper_bound",
    "FlowSpec",
    "simulate_flow",
    "quadratic_if_preset",
    # Validation
    "prejump_speed_tv",
    "limit_law_probability",
    # Configuration and experiments
    "SIMULATION_CONFIG",
    "PRESET_CONFIG",
    "ExperimentConfig",
    "load_experiment",
    "run_experiment",
    "run_sweep",
    "PDMPError",
    # Main function
    "simulate_process",
]


def simulate_process(process: str, cfg: ProcessConfig, seed: int = 0, replica: int = 0, k: int = 1,
                     x_horizon: float = 1.0):
    """
    Simulate one replica of any process kind.

    Args:
        process: constrained, averaged, penalized, mirror, flow or coupled
        cfg: Process configuration
        seed: Root seed
        replica: Replica index; replica r draws from RngStream(seed).replica(r)
        k: Penalty exponent (penalized and coupled)
        x_horizon: Space horizon (mirror)

    Returns:
        CadlagPath, PenalizedPath, FlowPath or CoupledPair depending on `process`

    Example:
        >>> cfg = quadratic_if_preset(epsilon=0.01, horizon=2.0)
        >>> path = simulate_process("flow", cfg, seed=7)
        >>> path.n_jumps >= 0
        True
    """
    return simulate_replica(ReplicaTask(process, cfg, k, x_horizon, seed, replica))
