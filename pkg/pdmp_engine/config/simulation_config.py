"""
Simulation configuration for the PDMP engine.
Contains numerical tolerances, output conventions, experiment defaults and presets.
"""

# Simulation Configuration
SIMULATION_CONFIG = {
    # Experiment file schema understood by the loader
    "schema_version": 1,

    # Numerical tolerances
    "tolerances": {
        "row_sum": 1e-12,  # |sum of a generator row| allowed, scaled by the row magnitude
        "irreducibility_threshold": 1e-14,  # off-diagonal entries above this count as edges
        "probability_sum": 1e-12,
        "stationary_residual": 1e-10,  # |pi Q| allowed after the solve
        "min_relative_pivot": 1e-13,  # LU pivots below this (relative) mean a singular system
        "round_trip": 1e-12,  # G / G^-1 composition
        "round_trip_grid": 1000,
    },

    # Random streams
    "rng": {
        "chunk_size": 4096,  # draws per refill when simulating the switching chain
    },

    # Artifacts
    "output": {
        "float_format": "%.17g",
        "hits_file": "hits",
        "coupling_file": "coupling",
        "path_file": "path_replica0",
        "switching_file": "switching_replica0",
        "summary_file": "summary.json",
        "plot_file": "plot_data.csv",
    },

    # Defaults filled into every resolved experiment
    "experiment_defaults": {
        "process": "constrained",
        "epsilon": 0.1,
        "horizon": 1.0,
        "rho": 0.25,
        "k": 2,
        "x_horizon": 1.0,
        "replicas": 100,
        "seed": 0,
        "workers": 1,
        "format": "csv",
        "out": "pdmp_output",
        "require_pass": False,
    },

    # Acceptance checks
    "acceptance": {
        "std_error_band": 3.0,  # statistical checks pass inside +/- 3 standard errors
        "drift_window_fraction": 0.9,  # window end as a fraction of (c - sup xi0) / max speed
    },
}

# Named presets
PRESET_CONFIG = {
    # Slow-fast quadratic integrate-and-fire neuron: dX/dt = (Y X)^2, Y on {1, 2}
    "quadratic-if": {
        "speeds": [1.0, 2.0],
        "q": [[-1.0, 1.0], [2.0, -2.0]],
        "m": 1.0,
        "c": 2.0,
        "rho": 0.25,
        "epsilon": 1e-3,
        "horizon": 5.0,
    },
}
