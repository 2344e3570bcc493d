"""
Simulators for the constrained process X_eps, the averaged limit and the mirror process.

Randomness per replica comes from one RngStream: the SWITCHING and ROUTING
sub-streams drive Y_eps, and the TARGETS sub-stream yields xi_0 (first draw)
followed by one uniform per boundary jump, fed to the inverse CDF of the
jump kernel.
"""

import logging
from typing import List

import numpy as np

from ..algebra.generator import (
    averaged_drift,
    averaged_mixture_kernel,
    boundary_speed_measure,
    next_averaged_hitting_time,
    tilted_generator,
)
from ..errors import ConfigInvalidError
from ..switching.ctmc import SwitchPath, simulate_switching
from ..switching.rng import RngStream, Substream
from .engine import SwitchingClock, assemble_segments, start_restarts
from .paths import CadlagPath, HittingRecord, PathKind
from .process_config import ProcessConfig

logger = logging.getLogger(__name__)


def draw_initial_value(cfg: ProcessConfig, targets: np.random.Generator) -> float:
    """xi_0 from the first TARGETS draw."""
    return float(cfg.initial.ppf(targets.random()))


def constrained_from_switching(
    cfg: ProcessConfig,
    switching: SwitchPath,
    xi0: float,
    targets: np.random.Generator,
) -> CadlagPath:
    """
    Run the constrained dynamics over a given switching realization.

    Args:
        cfg: Process description
        switching: Realization of Y_eps on [0, cfg.horizon]
        xi0: Initial position
        targets: Generator positioned after the xi_0 draw

    Returns:
        CadlagPath of kind CONSTRAINED with the switching path attached
    """
    clock = SwitchingClock(switching)
    c = cfg.boundary
    restarts = start_restarts(xi0)
    records: List[HittingRecord] = []
    position, offset = xi0, 0.0

    while True:
        target = offset + (c - position)
        hit, stretch = clock.first_passage(target)
        if hit > cfg.horizon:
            break
        speed = float(clock.speeds[stretch])
        xi = float(cfg.kernel_for(speed).ppf(targets.random()))
        records.append(HittingRecord(len(records) + 1, hit, speed, xi))
        restarts.add(hit, xi, target, c)
        position, offset = xi, target

    t_start, x_start, slopes, x_end = assemble_segments(clock, restarts)
    return CadlagPath(
        t_start, x_start, slopes, x_end,
        jumps=tuple(records),
        horizon=cfg.horizon,
        boundary=c,
        kind=PathKind.CONSTRAINED,
        switching=switching,
    )


def simulate_constrained(cfg: ProcessConfig, rng: RngStream) -> CadlagPath:
    """Exact simulation of X_eps on [0, T]."""
    switching = simulate_switching(cfg.generator, cfg.initial_speed, cfg.epsilon, cfg.horizon, rng)
    targets = rng.generator(Substream.TARGETS)
    xi0 = draw_initial_value(cfg, targets)
    path = constrained_from_switching(cfg, switching, xi0, targets)
    logger.debug("constrained path: %d hits, %d switches", path.n_jumps, switching.n_events)
    return path


def simulate_averaged(cfg: ProcessConfig, rng: RngStream) -> CadlagPath:
    """
    Simulate the averaged process: slope sum y pi(y), jumps drawn from the pi*-mixture of kernels.

    Each record's prejump_speed is the speed whose kernel the mixture selected,
    so the labels are pi*-distributed. With Dirac kernels the path is deterministic.
    """
    g = cfg.generator
    drift = averaged_drift(g)
    mixture = averaged_mixture_kernel(g, cfg.kernels)
    c = cfg.boundary
    targets = rng.generator(Substream.TARGETS)
    position = draw_initial_value(cfg, targets)

    t_start, x_start, x_end = [0.0], [position], []
    records: List[HittingRecord] = []
    time = 0.0
    while True:
        time = next_averaged_hitting_time(time, c, position, drift)
        if time > cfg.horizon:
            break
        component, local = mixture.select(targets.random())
        position = float(mixture.components[component].ppf(local))
        records.append(HittingRecord(len(records) + 1, time, float(g.speeds[component]), position))
        t_start.append(time)
        x_start.append(position)
        x_end.append(c)
    x_end.append(x_start[-1] + drift * (cfg.horizon - t_start[-1]))

    return CadlagPath(
        t_start, x_start, np.full(len(t_start), drift), x_end,
        jumps=tuple(records),
        horizon=cfg.horizon,
        boundary=c,
        kind=PathKind.AVERAGED,
    )


def _integrated_path(clock: SwitchingClock, horizon: float) -> CadlagPath:
    x_start = clock.displacement
    x_end = np.append(x_start[1:], clock.displacement_at(horizon))
    return CadlagPath(
        clock.tau, x_start, clock.speeds, x_end,
        jumps=(),
        horizon=horizon,
        boundary=np.inf,
        kind=PathKind.MIRROR,
        switching=clock.switching,
    )


def simulate_mirror(cfg: ProcessConfig, rng: RngStream, x_horizon: float) -> CadlagPath:
    """
    Mirror process M_eps(x) = integral over [0, x] of W_eps, W_eps driven by V^-1 Q.

    The path lives in the space variable x in [0, x_horizon]. W starts from
    row cfg.initial_speed when given, otherwise from pi*.
    """
    if not x_horizon > 0:
        raise ConfigInvalidError(f"x_horizon must be positive, got {x_horizon!r}")
    g = cfg.generator
    tilted = tilted_generator(g)
    init = cfg.initial_speed if cfg.initial_speed is not None else boundary_speed_measure(g)
    w = simulate_switching(tilted, init, cfg.epsilon, x_horizon, rng)
    return _integrated_path(SwitchingClock(w), x_horizon)


def mirror_readout(path: CadlagPath) -> CadlagPath:
    """
    Mirror process of the Y realization that drove a constrained path.

    Reciprocal speeds are read along space from time 0, so the value at
    c - xi_0 is the first hitting time T*_1 of that path.
    """
    if path.switching is None:
        raise ConfigInvalidError("mirror readout needs a path with its switching realization attached")
    clock = SwitchingClock(path.switching)
    space = clock.displacement
    x_horizon = clock.total_displacement()
    times_end = np.append(clock.tau[1:], clock.tau[-1] + (x_horizon - space[-1]) / clock.speeds[-1])
    return CadlagPath(
        space, clock.tau, 1.0 / clock.speeds, times_end,
        jumps=(),
        horizon=x_horizon,
        boundary=np.inf,
        kind=PathKind.MIRROR,
    )
