"""
Piecewise-linear cadlag paths: the common output of every simulator.

A path is stored as segments (t_start, x_start, slope, x_end) covering
[0, horizon] contiguously, plus one HittingRecord per boundary jump.
Evaluation is a binary search over segment starts.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..errors import OutOfHorizonError
from ..switching.ctmc import SwitchPath


class PathKind(Enum):
    """Which process produced a path."""

    CONSTRAINED = "constrained"
    PENALIZED = "penalized"
    AVERAGED = "averaged"
    MIRROR = "mirror"


@dataclass(frozen=True)
class HittingRecord:
    """Jump number i (from 1) at time T*_i, with Y(T*_i-) and the post-jump value xi_i."""

    index: int
    time: float
    prejump_speed: float
    postjump_value: float


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CadlagPath:
    """
    Piecewise-linear cadlag trajectory on [0, horizon].

    Segment j starts at t_start[j] with value x_start[j], moves with slope
    slopes[j] and reaches x_end[j] (its left limit) at the next segment start
    or at the horizon. For boundary-constrained paths x_end is exactly c
    before every jump.
    """

    t_start: np.ndarray
    x_start: np.ndarray
    slopes: np.ndarray
    x_end: np.ndarray
    jumps: Tuple[HittingRecord, ...]
    horizon: float
    boundary: float
    kind: PathKind
    switching: Optional[SwitchPath] = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("t_start", "x_start", "slopes", "x_end"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "jumps", tuple(self.jumps))

    @property
    def n_segments(self) -> int:
        return len(self.t_start)

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)

    @property
    def initial_value(self) -> float:
        return float(self.x_start[0])

    @property
    def jump_times(self) -> np.ndarray:
        return np.array([r.time for r in self.jumps], dtype=float)

    @property
    def postjump_values(self) -> np.ndarray:
        return np.array([r.postjump_value for r in self.jumps], dtype=float)

    @property
    def prejump_speeds(self) -> np.ndarray:
        return np.array([r.prejump_speed for r in self.jumps], dtype=float)

    def segment_ends(self) -> np.ndarray:
        """End time of every segment."""
        return np.append(self.t_start[1:], self.horizon)


def _segment_index(path: CadlagPath, ts: np.ndarray, left: bool) -> np.ndarray:
    if ts.size and (ts.min() < 0.0 or ts.max() > path.horizon or np.isnan(ts).any()):
        raise OutOfHorizonError(f"evaluation times leave [0, {path.horizon!r}]")
    index = np.searchsorted(path.t_start, ts, side="left" if left else "right") - 1
    # X(0-) is read as X(0)
    return np.maximum(index, 0)


def path_values(path: CadlagPath, ts, left: bool = False) -> np.ndarray:
    """
    Evaluate the path at many times.

    Args:
        path: Path to evaluate
        ts: Times in [0, horizon]
        left: Return left limits X(t-) instead of X(t)

    Returns:
        Array of values, same shape as ts
    """
    ts = np.asarray(ts, dtype=float)
    index = _segment_index(path, ts, left)
    values = path.x_start[index] + path.slopes[index] * (ts - path.t_start[index])
    # Slopes are positive: a segment never passes its own end value
    values = np.minimum(values, path.x_end[index])
    if left:
        at_end = ts == path.segment_ends()[index]
        values = np.where(at_end, path.x_end[index], values)
    return values


def path_value(path: CadlagPath, t: float, left: bool = False) -> float:
    """Cadlag evaluation X(t), or the left limit X(t-) when `left` is set."""
    return float(path_values(path, np.array([t]), left=left)[0])


def count_jumps(path: CadlagPath, t: float) -> int:
    """p*(t): number of boundary jumps at times <= t."""
    if not 0.0 <= t <= path.horizon:
        raise OutOfHorizonError(f"t={t!r} is outside [0, {path.horizon!r}]")
    return int(np.searchsorted(path.jump_times, t, side="right"))
