"""
Time changes of the penalized process.

lambda_eps(t) is the integral over [0, t] of 1 / (1 + eps^-k 1{X^P >= c}): it
runs at slope 1 below the boundary and at slope eps^k / (1 + eps^k) during
overshoots. mu_eps = Id - lambda_eps is the time spent "paused" above c.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigInvalidError
from ..processes.paths import path_values
from ..switching.ctmc import states_at
from .penalized import PenalizedPath, check_penalty_exponent

logger = logging.getLogger(__name__)

# Slack allowed on the 1-Lipschitz check, relative to the step
_LIPSCHITZ_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class PiecewiseLinearMap:
    """Increasing piecewise-linear map of [0, T] given by its knots."""

    knots_t: np.ndarray
    knots_value: np.ndarray

    def __post_init__(self):
        knots_t = np.array(self.knots_t, dtype=float)
        knots_value = np.array(self.knots_value, dtype=float)
        if knots_t.shape != knots_value.shape or knots_t.ndim != 1 or len(knots_t) < 2:
            raise ConfigInvalidError("a piecewise-linear map needs at least two matching knots")
        if np.any(np.diff(knots_t) <= 0):
            raise ConfigInvalidError("knot times must be strictly increasing")
        for array in (knots_t, knots_value):
            array.setflags(write=False)
        object.__setattr__(self, "knots_t", knots_t)
        object.__setattr__(self, "knots_value", knots_value)

    @property
    def horizon(self) -> float:
        return float(self.knots_t[-1])

    def __call__(self, t):
        return np.interp(t, self.knots_t, self.knots_value)

    def inverse(self, s):
        """Inverse map; requires strictly increasing knot values."""
        return np.interp(s, self.knots_value, self.knots_t)

    def sup_deviation(self) -> float:
        """||map - Id|| on [0, T]; attained at a knot."""
        return float(np.max(np.abs(self.knots_value - self.knots_t)))


@dataclass(frozen=True, eq=False)
class TimeChange(PiecewiseLinearMap):
    """
    lambda_eps for one penalized path.

    `slopes[j]` is the exact slope on [knots_t[j], knots_t[j + 1]]: 1 below the
    boundary, eps^k / (1 + eps^k) during an overshoot. For large k the knot
    values no longer resolve overshoots, so invariants are checked on slopes.
    """

    slopes: Optional[np.ndarray] = None

    def __post_init__(self):
        super().__post_init__()
        if self.slopes is None:
            slopes = np.diff(self.knots_value) / np.diff(self.knots_t)
        else:
            slopes = np.array(self.slopes, dtype=float)
        if slopes.shape != (len(self.knots_t) - 1,):
            raise ConfigInvalidError("a time change needs one slope per knot interval")
        slopes.setflags(write=False)
        object.__setattr__(self, "slopes", slopes)

    def mu(self, t):
        return np.asarray(t, dtype=float) - self(t)

    def check_invariants(self) -> None:
        """
        Raise ConfigInvalidError unless lambda(0) = 0, every slope lies in
        (0, 1] (strictly increasing, 1-Lipschitz, mu = Id - lambda
        nondecreasing) and the knot values integrate the slopes.
        """
        if self.knots_t[0] != 0.0 or self.knots_value[0] != 0.0:
            raise ConfigInvalidError("time change must start at (0, 0)")
        if np.any(self.slopes <= 0):
            raise ConfigInvalidError("time change is not strictly increasing")
        if np.any(self.slopes > 1.0 + _LIPSCHITZ_SLACK):
            raise ConfigInvalidError("time change is not 1-Lipschitz; mu = Id - lambda decreases")
        dt = np.diff(self.knots_t)
        dl = np.diff(self.knots_value)
        scale = np.maximum(1.0, np.abs(self.knots_value[1:]))
        if np.any(np.abs(dl - self.slopes * dt) > _LIPSCHITZ_SLACK * scale):
            raise ConfigInvalidError("time change knot values do not integrate its slopes")


def overshoot_slope(epsilon: float, k: int) -> float:
    """1 / (1 + eps^-k), computed as eps^k / (1 + eps^k)."""
    scale = epsilon ** k
    return scale / (1.0 + scale)


def time_change(path: PenalizedPath, epsilon: float, k: int) -> TimeChange:
    """
    Exact lambda_eps of a penalized path.

    Knots sit at the horizon and at both ends of every overshoot (clipped at
    the horizon). Zero-length overshoots leave no knot.
    """
    k = check_penalty_exponent(k)
    slope = overshoot_slope(epsilon, k)
    knots_t, knots_value, slopes = [0.0], [0.0], []
    for start, end in path.overshoot_intervals():
        if end <= start:
            continue
        knots_value.append(knots_value[-1] + (start - knots_t[-1]))
        knots_t.append(float(start))
        slopes.append(1.0)
        knots_value.append(knots_value[-1] + slope * (end - start))
        knots_t.append(float(end))
        slopes.append(slope)
    if knots_t[-1] < path.horizon:
        knots_value.append(knots_value[-1] + (path.horizon - knots_t[-1]))
        knots_t.append(path.horizon)
        slopes.append(1.0)
    # Drop empty intervals (an overshoot starting at 0)
    nonempty = np.diff(knots_t) > 0
    keep = np.concatenate(([True], nonempty))
    return TimeChange(
        np.asarray(knots_t)[keep], np.asarray(knots_value)[keep], np.asarray(slopes)[nonempty]
    )


def time_changed_values(path: PenalizedPath, tc: TimeChange, ts) -> Tuple[np.ndarray, np.ndarray]:
    """
    The time-changed pair on [0, T].

    Returns:
        (U_eps(ts), V_eps(ts)) with U = X^P o lambda and V = Y_eps o lambda
    """
    warped = np.clip(tc(np.asarray(ts, dtype=float)), 0.0, path.horizon)
    u = path_values(path, warped)
    if path.switching is None:
        raise ConfigInvalidError("penalized path has no switching realization attached")
    v = path.switching.speeds[states_at(path.switching, warped)]
    return u, v
