"""
Switching chain simulation and counter-based random streams.
"""

from .rng import RngStream, Substream
from .ctmc import (
    SwitchPath,
    simulate_switching,
    state_at,
    states_at,
    speed_at,
    occupation_measure,
    holding_times,
    has_event_in,
)

__all__ = [
    "RngStream",
    "Substream",
    "SwitchPath",
    "simulate_switching",
    "state_at",
    "states_at",
    "speed_at",
    "occupation_measure",
    "holding_times",
    "has_event_in",
]
