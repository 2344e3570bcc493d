"""
Constrained, averaged and mirror processes with their path types.
"""

from .process_config import ProcessConfig, validate_process_config, jump_count_bound
from .paths import CadlagPath, HittingRecord, PathKind, path_value, path_values, count_jumps
from .engine import SwitchingClock
from .simulators import (
    simulate_constrained,
    simulate_averaged,
    simulate_mirror,
    mirror_readout,
    constrained_from_switching,
    draw_initial_value,
)
from .export import hits_to_dataframe, path_to_dataframe, write_table

__all__ = [
    "ProcessConfig",
    "validate_process_config",
    "jump_count_bound",
    "CadlagPath",
    "HittingRecord",
    "PathKind",
    "path_value",
    "path_values",
    "count_jumps",
    "SwitchingClock",
    "simulate_constrained",
    "simulate_averaged",
    "simulate_mirror",
    "mirror_readout",
    "constrained_from_switching",
    "draw_initial_value",
    "hits_to_dataframe",
    "path_to_dataframe",
    "write_table",
]
