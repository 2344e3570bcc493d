"""
Estimators tying simulated paths to the closed-form limit objects.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from ..algebra.generator import ProbabilityVector, SwitchingGenerator, invariant_measure, stationary_on_speeds
from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import ConfigInvalidError, EmptyInputError, WindowContainsHitError
from ..processes.paths import CadlagPath, HittingRecord, path_value, path_values
from ..processes.process_config import ProcessConfig
from ..switching.ctmc import SwitchPath, occupation_measure
from .summary import MonteCarloEstimate, estimate_from_samples

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpiricalLaw:
    """Counts of observed values over their (sorted) support."""

    support: Tuple[float, ...]
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.support) != len(self.counts):
            raise ConfigInvalidError("support and counts must have the same length")
        if any(c < 0 for c in self.counts):
            raise ConfigInvalidError(f"counts must be nonnegative: {self.counts}")
        if sum(self.counts) == 0:
            raise EmptyInputError("empirical law with no observations")

    @property
    def total(self) -> int:
        return int(sum(self.counts))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "EmpiricalLaw":
        values = np.asarray(list(values), dtype=float)
        if values.size == 0:
            raise EmptyInputError("empirical law of an empty sample")
        support, counts = np.unique(values, return_counts=True)
        return cls(tuple(float(s) for s in support), tuple(int(c) for c in counts))

    def as_dict(self) -> Dict[float, float]:
        """Relative frequencies keyed by support point."""
        total = self.total
        return {s: c / total for s, c in zip(self.support, self.counts)}

    def weight_of(self, point: float) -> float:
        return self.as_dict().get(float(point), 0.0)


Law = Union[EmpiricalLaw, ProbabilityVector]


def prejump_speed_law(records: Iterable[HittingRecord]) -> EmpiricalLaw:
    """Empirical law of Y_eps(T*_i-) over the given hitting records."""
    speeds = [r.prejump_speed for r in records]
    if not speeds:
        raise EmptyInputError("no hitting records to build a pre-jump speed law from")
    return EmpiricalLaw.from_values(speeds)


def tv_distance(a: Law, b: Law) -> float:
    """Total variation distance: half the l1 distance over the union of supports."""
    weights_a, weights_b = a.as_dict(), b.as_dict()
    points = set(weights_a) | set(weights_b)
    return 0.5 * math.fsum(abs(weights_a.get(p, 0.0) - weights_b.get(p, 0.0)) for p in points)


def tv_standard_error(law: EmpiricalLaw) -> float:
    """Multinomial standard error of the TV between an empirical law and its target (exact for two points)."""
    n = law.total
    return 0.5 * math.fsum(math.sqrt(p * (1.0 - p) / n) for p in law.as_dict().values())


def prejump_speed_tv(records: Sequence[HittingRecord], g: SwitchingGenerator) -> Tuple[float, float]:
    """
    TV between the empirical pre-jump speed law and pi* moved onto the speeds.

    Returns:
        (tv, standard error)
    """
    law = prejump_speed_law(records)
    return tv_distance(law, stationary_on_speeds(g)), tv_standard_error(law)


def pre_boundary_window(cfg: ProcessConfig, fraction: float = None) -> Tuple[float, float]:
    """
    A drift window no path can hit the boundary in: (0, fraction * (c - sup xi_0) / max speed).
    """
    fraction = fraction if fraction is not None else SIMULATION_CONFIG["acceptance"]["drift_window_fraction"]
    reach = (cfg.boundary - cfg.initial.upper_bound) / cfg.max_speed
    return 0.0, min(fraction * reach, cfg.horizon)


def drift_estimate(paths: Sequence[CadlagPath], window: Tuple[float, float]) -> MonteCarloEstimate:
    """
    Mean slope (X(t1) - X(t0)) / (t1 - t0) across replicas.

    Raises:
        WindowContainsHitError: when some path jumps before t1
    """
    t0, t1 = window
    if not t1 > t0:
        raise ConfigInvalidError(f"drift window must have t1 > t0, got {window}")
    if not paths:
        raise EmptyInputError("no paths to estimate a drift from")
    slopes = np.empty(len(paths))
    for r, path in enumerate(paths):
        if path.n_jumps and path.jumps[0].time <= t1:
            raise WindowContainsHitError(
                f"replica {r} hits the boundary at {path.jumps[0].time!r}, inside the window {window}"
            )
        slopes[r] = (path_value(path, t1) - path_value(path, t0)) / (t1 - t0)
    return estimate_from_samples(slopes)


def _cdf_pair(reference) -> Tuple[Callable, Callable]:
    if hasattr(reference, "cdf") and hasattr(reference, "cdf_left"):
        return np.vectorize(reference.cdf), np.vectorize(reference.cdf_left)
    if hasattr(reference, "cdf"):
        return reference.cdf, reference.cdf
    return reference, reference


def ks_statistic(sample: Sequence[float], reference) -> float:
    """
    Kolmogorov-Smirnov distance between a sample and a reference law.

    The supremum is taken over the sample points using both one-sided limits
    of each CDF, which is exact for continuous references and for references
    with atoms (a constant sample against the matching Dirac gives 0).

    Args:
        sample: Observations
        reference: Object with cdf (and optionally cdf_left), a frozen scipy
            distribution, or a plain CDF callable
    """
    values = np.sort(np.asarray(sample, dtype=float))
    n = len(values)
    if n == 0:
        raise EmptyInputError("KS statistic of an empty sample")
    cdf, cdf_left = _cdf_pair(reference)
    empirical = np.searchsorted(values, values, side="right") / n
    empirical_left = np.searchsorted(values, values, side="left") / n
    right_gap = np.abs(empirical - np.asarray(cdf(values), dtype=float))
    left_gap = np.abs(empirical_left - np.asarray(cdf_left(values), dtype=float))
    return float(max(right_gap.max(), left_gap.max()))


def ks_threshold(n: int, alpha: float = 0.001) -> float:
    """Critical value of the one-sample KS statistic at level alpha."""
    return float(stats.kstwo.ppf(1.0 - alpha, n))


def occupation_vs_pi(paths: Sequence[SwitchPath], t: float) -> float:
    """TV between the replica-mean occupation measure on [0, t] and pi."""
    if not paths:
        raise EmptyInputError("no switching paths")
    occupations = np.array([occupation_measure(p, t) for p in paths])
    mean = occupations.mean(axis=0)
    pi = invariant_measure(paths[0].generator).weights
    return 0.5 * math.fsum(np.abs(mean - pi))


def martingale_residual(
    paths: Sequence[CadlagPath],
    f: Callable[[float], float],
    cfg: ProcessConfig,
    t: float,
) -> MonteCarloEstimate:
    """
    Monte Carlo mean of the martingale associated with f at time t.

    Per path: f(X(t)) - f(X(0)) - integral of f'(X) Y ds - sum over jumps of
    (nu_{Y(T*_i-)} f - f(c)). On a segment of slope Y the integral term is
    f(segment end) - f(segment start), so it is evaluated exactly.
    """
    if not paths:
        raise EmptyInputError("no paths")
    kernel_means = {y: cfg.kernel_for(y).expect(f) for y in cfg.kernels}
    f_vec = np.vectorize(f, otypes=[float])
    residuals = np.empty(len(paths))
    c = cfg.boundary
    for r, path in enumerate(paths):
        starts = path.t_start[path.t_start < t]
        ends = np.minimum(np.append(starts[1:], t), t)
        drift_part = math.fsum(f_vec(path_values(path, ends, left=True)) - f_vec(path_values(path, starts)))
        jump_part = math.fsum(
            kernel_means[rec.prejump_speed] - f(c) for rec in path.jumps if rec.time <= t
        )
        residuals[r] = f(path_value(path, t)) - f(path.initial_value) - drift_part - jump_part
    return estimate_from_samples(residuals)
