"""
Reduction of a separated flow to a piecewise-linear process, and the
quadratic integrate-and-fire preset.

Z = G(X) moves at constant speed alpha(Y) and hits G(c) exactly when X hits
c, so the flow is simulated in Z-coordinates and read back through G^-1.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..algebra.generator import SwitchingGenerator
from ..algebra.kernels import JumpKernel, UniformKernel
from ..config.simulation_config import PRESET_CONFIG
from ..errors import ConfigInvalidError
from ..processes.paths import CadlagPath, HittingRecord, path_values
from ..processes.process_config import ProcessConfig
from ..processes.simulators import simulate_averaged, simulate_constrained
from ..switching.rng import RngStream
from .homeomorphism import FlowSpec, Homeomorphism, build_homeomorphism

logger = logging.getLogger(__name__)


def _reduced_gap(homeo: Homeomorphism, c: float, rho: float) -> float:
    """G(c) - G(c - rho), nudged down so that G(c) - gap never falls below G(c - rho)."""
    upper = homeo.upper
    below = float(homeo.forward(c - rho))
    gap = upper - below
    while upper - gap < below:
        gap = float(np.nextafter(gap, 0.0))
    return gap


def reduce_to_linear(cfg: ProcessConfig) -> ProcessConfig:
    """
    The piecewise-linear config of Z = G(X).

    Speeds become alpha(y), sorted increasingly with Q permuted along (a
    relabelling of the same chain). Kernels and the initial law are pushed
    through G, the boundary becomes G(c) and the gap G(c) - G(c - rho).

    Raises:
        ConfigInvalidError: no flow, missing or colliding alpha values
    """
    spec = cfg.flow
    if spec is None:
        raise ConfigInvalidError("reduce_to_linear needs a config with a flow")
    homeo = build_homeomorphism(spec)
    g = cfg.generator

    try:
        alphas = np.array([spec.alpha[float(y)] for y in g.speeds])
    except KeyError as exc:
        raise ConfigInvalidError(f"alpha is not defined for speed {exc}") from exc
    if len(np.unique(alphas)) != len(alphas):
        raise ConfigInvalidError(f"alpha must take distinct values on the speeds, got {alphas.tolist()}")

    order = np.argsort(alphas, kind="stable")
    reduced_generator = SwitchingGenerator(alphas[order], g.q[np.ix_(order, order)])
    kernels = {
        float(spec.alpha[float(y)]): cfg.kernel_for(y).pushforward(homeo.forward, homeo.inverse)
        for y in g.speeds
    }
    initial_speed = None
    if cfg.initial_speed is not None:
        initial_speed = int(np.flatnonzero(order == cfg.initial_speed)[0])

    reduced = ProcessConfig(
        generator=reduced_generator,
        boundary=homeo.upper,
        initial=cfg.initial.pushforward(homeo.forward, homeo.inverse),
        kernels=kernels,
        epsilon=cfg.epsilon,
        horizon=cfg.horizon,
        rho=_reduced_gap(homeo, cfg.boundary, cfg.rho),
        initial_speed=initial_speed,
    )
    logger.debug("reduced flow: speeds %s, boundary %s", reduced_generator.speeds.tolist(), reduced.boundary)
    return reduced


@dataclass(frozen=True, eq=False)
class FlowPath:
    """
    A flow trajectory: the simulated Z path and the map back to x-coordinates.

    Jump times of X and Z are the same numbers; X values are G^-1 of Z values.
    """

    z_path: CadlagPath
    homeo: Homeomorphism
    # alpha(y) -> y, to label records with the original speeds
    speed_of_alpha: Mapping[float, float]

    @property
    def horizon(self) -> float:
        return self.z_path.horizon

    @property
    def jump_times(self) -> np.ndarray:
        return self.z_path.jump_times

    @property
    def jumps(self) -> Tuple[HittingRecord, ...]:
        """Hitting records in x-coordinates with the original speeds."""
        return tuple(
            HittingRecord(
                r.index,
                r.time,
                self.speed_of_alpha.get(r.prejump_speed, r.prejump_speed),
                float(self.homeo.inverse(r.postjump_value)),
            )
            for r in self.z_path.jumps
        )

    @property
    def n_jumps(self) -> int:
        return self.z_path.n_jumps

    def to_x(self, z):
        """G^-1 with G(c) read back as c exactly."""
        z = np.asarray(z, dtype=float)
        # Left limits at hits are G(c) exactly
        return np.where(z == self.z_path.boundary, self.homeo.c, self.homeo.inverse(z))

    def scalar_x(self, z: float) -> float:
        return float(self.to_x(z))

    def values(self, ts, left: bool = False) -> np.ndarray:
        """X at many times."""
        return self.to_x(path_values(self.z_path, ts, left=left))

    def value(self, t: float, left: bool = False) -> float:
        return float(self.values(np.array([t]), left=left)[0])


def simulate_flow(cfg: ProcessConfig, rng: RngStream, averaged: bool = False) -> FlowPath:
    """
    Simulate the flow exactly through its linear reduction.

    Args:
        cfg: Config carrying a FlowSpec
        rng: Replica stream
        averaged: Simulate the averaged reduced process instead (drift sum alpha(y) pi(y))
    """
    reduced = reduce_to_linear(cfg)
    z_path = simulate_averaged(reduced, rng) if averaged else simulate_constrained(reduced, rng)
    homeo = build_homeomorphism(cfg.flow)
    speed_of_alpha = {float(a): float(y) for y, a in cfg.flow.alpha.items()}
    return FlowPath(z_path, homeo, speed_of_alpha)


def quadratic_if_preset(
    m: Optional[float] = None,
    c: Optional[float] = None,
    rho: Optional[float] = None,
    kernels: Optional[Dict[float, JumpKernel]] = None,
    initial: Optional[JumpKernel] = None,
    epsilon: Optional[float] = None,
    horizon: Optional[float] = None,
    initial_speed: Optional[int] = None,
) -> ProcessConfig:
    """
    Slow-fast quadratic integrate-and-fire neuron dx/dt = (Y x)^2 with reset at c.

    Y switches on {1, 2} with Q = [[-1, 1], [2, -2]], so alpha(y) = y^2 takes
    values {1, 4}. Kernels and the initial law default to uniform on (m, c - rho).
    """
    preset = PRESET_CONFIG["quadratic-if"]
    m = preset["m"] if m is None else m
    c = preset["c"] if c is None else c
    rho = preset["rho"] if rho is None else rho
    if not m + rho < c:
        raise ConfigInvalidError(f"need m + rho < c, got m={m}, rho={rho}, c={c}")
    generator = SwitchingGenerator(preset["speeds"], preset["q"])
    default_kernel = UniformKernel(m, c - rho)
    if kernels is None:
        kernels = {float(y): default_kernel for y in generator.speeds}
    flow = FlowSpec(m=m, c=c, alpha={float(y): float(y) ** 2 for y in generator.speeds})
    return ProcessConfig(
        generator=generator,
        boundary=c,
        initial=initial if initial is not None else default_kernel,
        kernels=kernels,
        epsilon=preset["epsilon"] if epsilon is None else epsilon,
        horizon=preset["horizon"] if horizon is None else horizon,
        rho=rho,
        initial_speed=initial_speed,
        flow=flow,
    )
