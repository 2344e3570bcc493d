"""
Penalized process, time changes, coupling and Skorokhod bounds.
"""

from .penalized import Overshoot, PenalizedPath, simulate_penalized, penalized_from_switching
from .time_change import (
    PiecewiseLinearMap,
    TimeChange,
    overshoot_slope,
    time_change,
    time_changed_values,
)
from .distances import (
    identity_warp,
    jump_matching_warp,
    sup_distance,
    warped_distance,
    skorokhod_upper_bound,
)
from .coupling import CoupledPair, simulate_coupled, wasserstein_estimate

__all__ = [
    "Overshoot",
    "PenalizedPath",
    "simulate_penalized",
    "penalized_from_switching",
    "PiecewiseLinearMap",
    "TimeChange",
    "overshoot_slope",
    "time_change",
    "time_changed_values",
    "identity_warp",
    "jump_matching_warp",
    "sup_distance",
    "warped_distance",
    "skorokhod_upper_bound",
    "CoupledPair",
    "simulate_coupled",
    "wasserstein_estimate",
]
