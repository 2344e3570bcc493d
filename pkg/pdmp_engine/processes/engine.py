"""
Event-driven engine shared by the constrained and penalized simulators.

Between restarts the position is xi + (D(t) - D(t_restart)) where D is the
cumulative displacement of the switching realization. D is piecewise linear
with known values at every switching time, so the first passage of a level
is one binary search plus one division; nothing is time-stepped.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import NonfiniteTimeError
from ..switching.ctmc import SwitchPath
from .process_config import ProcessConfig

logger = logging.getLogger(__name__)


class SwitchingClock:
    """Cumulative displacement D(t) = integral of Y_eps over [0, t] for one switching path."""

    def __init__(self, switching: SwitchPath):
        self.switching = switching
        self.tau = switching.stretch_starts()
        self.speeds = switching.speeds[switching.stretch_states()]
        self.horizon = switching.horizon
        steps = self.speeds[:-1] * np.diff(self.tau)
        self.displacement = np.concatenate(([0.0], np.cumsum(steps)))

    def stretch_of(self, t: float, left: bool = False) -> int:
        """Stretch in force at t (or just before t when `left` is set)."""
        index = int(np.searchsorted(self.tau, t, side="left" if left else "right")) - 1
        return max(index, 0)

    def displacement_at(self, t: float) -> float:
        j = self.stretch_of(t)
        return float(self.displacement[j] + self.speeds[j] * (t - self.tau[j]))

    def first_passage(self, target: float) -> Tuple[float, int]:
        """
        First time D reaches `target`.

        Returns:
            (time, stretch index of the speed in force just before that time);
            the time may exceed the horizon when D never gets there
        """
        j = max(int(np.searchsorted(self.displacement, target, side="left")) - 1, 0)
        time = self.tau[j] + (target - self.displacement[j]) / self.speeds[j]
        # A passage exactly at a switch keeps the pre-switch speed
        if j + 1 < len(self.tau):
            time = min(time, self.tau[j + 1])
        time = max(time, self.tau[j])
        if not np.isfinite(time):
            raise NonfiniteTimeError(f"first passage of displacement {target!r} is not finite")
        return float(time), j

    def total_displacement(self) -> float:
        return self.displacement_at(self.horizon)


@dataclass
class Restarts:
    """Restart points of a trajectory: time 0 and every jump."""

    times: List[float]
    values: List[float]
    displacements: List[float]
    # Left limit of the trajectory at restarts 1, 2, ...
    prejump_values: List[float]

    def add(self, time: float, value: float, displacement: float, prejump_value: float) -> None:
        self.times.append(time)
        self.values.append(value)
        self.displacements.append(displacement)
        self.prejump_values.append(prejump_value)


def start_restarts(xi0: float) -> Restarts:
    return Restarts([0.0], [xi0], [0.0], [])


def assemble_segments(clock: SwitchingClock, restarts: Restarts) -> Tuple[np.ndarray, ...]:
    """
    Merge restarts and switching times into contiguous segments.

    A switch falling exactly on a restart is absorbed by the restart segment,
    which carries the post-switch speed.

    Returns:
        (t_start, x_start, slopes, x_end)
    """
    horizon = clock.horizon
    restart_t = np.asarray(restarts.times, dtype=float)
    restart_x = np.asarray(restarts.values, dtype=float)
    restart_d = np.asarray(restarts.displacements, dtype=float)
    prejump = np.asarray(restarts.prejump_values, dtype=float)

    switches = clock.tau[1:]
    switches = switches[~np.isin(switches, restart_t)]
    seg_t = np.concatenate((restart_t, switches))
    is_restart = np.concatenate((np.ones(len(restart_t), bool), np.zeros(len(switches), bool)))
    order = np.argsort(seg_t, kind="stable")
    seg_t, is_restart = seg_t[order], is_restart[order]

    block = np.searchsorted(restart_t, seg_t, side="right") - 1
    stretch = np.searchsorted(clock.tau, seg_t, side="right") - 1
    slopes = clock.speeds[stretch]
    x_start = np.where(
        is_restart,
        restart_x[block],
        restart_x[block] + (clock.displacement[stretch] - restart_d[block]),
    )

    x_end = np.empty_like(x_start)
    x_end[:-1] = x_start[1:]
    before_restart = np.flatnonzero(is_restart[1:])
    x_end[before_restart] = prejump[block[before_restart + 1] - 1]
    x_end[-1] = x_start[-1] + slopes[-1] * (horizon - seg_t[-1])
    return seg_t, x_start, slopes, x_end
