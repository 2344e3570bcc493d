"""
Coupling of the constrained process with its penalized relaxation.

One switching realization drives both processes. Both read their jump
targets from their own copy of the TARGETS sub-stream, so jump i of either
process is driven by the same uniform: the constrained one through the
kernel of its pre-hit speed, the penalized one through the kernel of the
speed in force when its overshoot ends. The two land on the same point
unless Y_eps switched during that overshoot, which is flagged.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import ConfigInvalidError
from ..processes.paths import CadlagPath
from ..processes.process_config import ProcessConfig
from ..processes.simulators import constrained_from_switching, draw_initial_value
from ..switching.ctmc import has_event_in, simulate_switching
from ..switching.rng import RngStream, Substream
from ..validation.summary import MonteCarloEstimate, estimate_from_samples
from .distances import jump_matching_warp, skorokhod_upper_bound, sup_distance
from .penalized import PenalizedPath, check_penalty_exponent, penalized_from_switching
from .time_change import PiecewiseLinearMap, TimeChange, time_change

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoupledPair:
    """
    X_eps and X^P_eps glued on one randomness source.

    `warp` maps the time axis of x onto that of xp so that matched jumps
    coincide; coupling_broken[i] is True when Y_eps switched in
    (T*_i, T*P_i] for the i-th matched jump.
    """

    x: CadlagPath
    xp: PenalizedPath
    shared_jump_targets: Tuple[float, ...]
    warp: PiecewiseLinearMap
    coupling_broken: Tuple[bool, ...]
    lambda_map: TimeChange

    @property
    def k(self) -> int:
        return self.xp.k

    @property
    def any_broken(self) -> bool:
        return any(self.coupling_broken)

    def sup_distance_after_warp(self) -> float:
        """sup over [0, T] of |X_eps - X^P_eps o warp|."""
        return sup_distance(self.x, self.xp, self.warp)

    def lambda_sup_deviation(self) -> float:
        return self.lambda_map.sup_deviation()

    def report_row(self, replica: int) -> dict:
        """One row of the coupling report."""
        return {
            "replica": replica,
            "k": self.k,
            "epsilon": self.xp.epsilon,
            "n_jumps_x": self.x.n_jumps,
            "n_jumps_xp": self.xp.n_jumps,
            "coupling_broken": self.any_broken,
            "sup_dist_after_warp": self.sup_distance_after_warp(),
            "lambda_sup_dev": self.lambda_sup_deviation(),
        }


def simulate_coupled(cfg: ProcessConfig, k: int, rng: RngStream) -> CoupledPair:
    """
    Simulate (X_eps, X^P_eps) on one switching path with shared jump uniforms.

    The x component is pathwise identical to simulate_constrained(cfg, rng).
    """
    k = check_penalty_exponent(k)
    switching = simulate_switching(cfg.generator, cfg.initial_speed, cfg.epsilon, cfg.horizon, rng)
    targets_x = rng.generator(Substream.TARGETS)
    targets_xp = rng.generator(Substream.TARGETS)
    xi0 = draw_initial_value(cfg, targets_x)
    draw_initial_value(cfg, targets_xp)

    x = constrained_from_switching(cfg, switching, xi0, targets_x)
    xp = penalized_from_switching(cfg, k, switching, xi0, targets_xp, rng.generator(Substream.OVERSHOOT))

    matched = min(x.n_jumps, xp.n_jumps)
    broken = tuple(
        has_event_in(switching, x.jumps[i].time, xp.jumps[i].time) for i in range(matched)
    )
    pair = CoupledPair(
        x=x,
        xp=xp,
        shared_jump_targets=tuple(float(r.postjump_value) for r in x.jumps),
        warp=jump_matching_warp(x, xp),
        coupling_broken=broken,
        lambda_map=time_change(xp, cfg.epsilon, k),
    )
    logger.debug(
        "coupled pair k=%d: %d/%d jumps, broken=%s", k, x.n_jumps, xp.n_jumps, pair.any_broken
    )
    return pair


def wasserstein_estimate(cfg: ProcessConfig, k: int, replicas: int, rng: RngStream) -> MonteCarloEstimate:
    """
    Monte Carlo upper-bound estimate of W(X_eps, X^P_eps).

    Replica r uses rng.replica(r); the estimate is the mean of
    skorokhod_upper_bound over the coupled pairs, with its standard error.
    """
    if replicas < 2:
        raise ConfigInvalidError(f"need at least 2 replicas for a standard error, got {replicas}")
    bounds = np.empty(replicas)
    for r in range(replicas):
        pair = simulate_coupled(cfg, k, rng.replica(r))
        bounds[r] = skorokhod_upper_bound(pair.x, pair.xp)
    return estimate_from_samples(bounds)
