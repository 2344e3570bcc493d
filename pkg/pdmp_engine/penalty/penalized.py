"""
Penalized process X^P_eps.

Below c it moves exactly like X_eps. On reaching c it keeps moving at the
current speed (Y_eps keeps switching) and jumps after an exponential time of
mean eps^k, drawn from the OVERSHOOT sub-stream. The jump target uses the
kernel of the speed in force just before the jump.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import ConfigInvalidError
from ..processes.engine import SwitchingClock, assemble_segments, start_restarts
from ..processes.paths import CadlagPath, HittingRecord, PathKind
from ..processes.process_config import ProcessConfig
from ..processes.simulators import draw_initial_value
from ..switching.ctmc import SwitchPath, simulate_switching
from ..switching.rng import RngStream, Substream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Overshoot:
    """
    One excursion above c: entered at hit_time, lasting `duration`.

    An overshoot still running at the horizon has completed=False and no
    jump data (postjump_value and speed_at_jump are NaN).
    """

    hit_time: float
    duration: float
    jump_time: float
    postjump_value: float
    speed_at_jump: float
    completed: bool = True


@dataclass(frozen=True, eq=False)
class PenalizedPath(CadlagPath):
    """CadlagPath of X^P_eps together with its overshoot intervals."""

    overshoots: Tuple[Overshoot, ...] = ()
    k: int = 1
    epsilon: float = 1.0

    def overshoot_intervals(self) -> np.ndarray:
        """(start, end) of every overshoot, clipped at the horizon; shape (n, 2)."""
        if not self.overshoots:
            return np.empty((0, 2))
        starts = np.array([o.hit_time for o in self.overshoots])
        ends = np.minimum([o.jump_time for o in self.overshoots], self.horizon)
        return np.column_stack((starts, ends))


def check_penalty_exponent(k) -> int:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ConfigInvalidError(f"penalty exponent k must be an integer >= 1, got {k!r}")
    return int(k)


def penalized_from_switching(
    cfg: ProcessConfig,
    k: int,
    switching: SwitchPath,
    xi0: float,
    targets: np.random.Generator,
    clocks: np.random.Generator,
) -> PenalizedPath:
    """
    Run the penalized dynamics over a given switching realization.

    Args:
        cfg: Process description
        k: Penalty exponent; overshoots last Exp(mean eps^k)
        switching: Realization of Y_eps on [0, cfg.horizon]
        xi0: Initial position
        targets: Generator positioned after the xi_0 draw
        clocks: Generator for the overshoot durations

    Returns:
        PenalizedPath with one Overshoot per boundary crossing in [0, T]
    """
    k = check_penalty_exponent(k)
    scale = cfg.epsilon ** k
    clock = SwitchingClock(switching)
    c = cfg.boundary
    restarts = start_restarts(xi0)
    records: List[HittingRecord] = []
    overshoots: List[Overshoot] = []
    position, offset = xi0, 0.0

    while True:
        hit, _ = clock.first_passage(offset + (c - position))
        if hit > cfg.horizon:
            break
        duration = float(clocks.standard_exponential()) * scale
        jump = hit + duration
        if jump > cfg.horizon:
            overshoots.append(Overshoot(hit, duration, jump, np.nan, np.nan, completed=False))
            break
        stretch = clock.stretch_of(jump, left=True)
        speed = float(clock.speeds[stretch])
        jump_offset = float(clock.displacement[stretch] + clock.speeds[stretch] * (jump - clock.tau[stretch]))
        xi = float(cfg.kernel_for(speed).ppf(targets.random()))
        prejump = position + (jump_offset - offset)
        records.append(HittingRecord(len(records) + 1, jump, speed, xi))
        overshoots.append(Overshoot(hit, duration, jump, xi, speed))
        restarts.add(jump, xi, jump_offset, prejump)
        position, offset = xi, jump_offset

    t_start, x_start, slopes, x_end = assemble_segments(clock, restarts)
    return PenalizedPath(
        t_start, x_start, slopes, x_end,
        jumps=tuple(records),
        horizon=cfg.horizon,
        boundary=c,
        kind=PathKind.PENALIZED,
        switching=switching,
        overshoots=tuple(overshoots),
        k=k,
        epsilon=cfg.epsilon,
    )


def simulate_penalized(cfg: ProcessConfig, k: int, rng: RngStream) -> PenalizedPath:
    """Exact simulation of X^P_eps on [0, T] with penalty exponent k."""
    switching = simulate_switching(cfg.generator, cfg.initial_speed, cfg.epsilon, cfg.horizon, rng)
    targets = rng.generator(Substream.TARGETS)
    xi0 = draw_initial_value(cfg, targets)
    path = penalized_from_switching(cfg, k, switching, xi0, targets, rng.generator(Substream.OVERSHOOT))
    logger.debug("penalized path (k=%d): %d jumps, %d overshoots", path.k, path.n_jumps, len(path.overshoots))
    return path
