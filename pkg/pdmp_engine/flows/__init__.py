"""
Separated flows and their reduction to piecewise-linear processes.
"""

from .homeomorphism import (
    FlowKind,
    FlowSpec,
    Homeomorphism,
    build_homeomorphism,
    table_flow,
    quadratic_trajectory,
    quadratic_hit_time,
)
from .reduction import FlowPath, reduce_to_linear, simulate_flow, quadratic_if_preset

__all__ = [
    "FlowKind",
    "FlowSpec",
    "Homeomorphism",
    "build_homeomorphism",
    "table_flow",
    "quadratic_trajectory",
    "quadratic_hit_time",
    "FlowPath",
    "reduce_to_linear",
    "simulate_flow",
    "quadratic_if_preset",
]
