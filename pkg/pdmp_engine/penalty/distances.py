"""
Certified upper bounds on the Skorokhod distance between two cadlag paths.

d_S(A, B) = inf over warps w of max(||w - Id||, ||A - B o w||). The infimum
is not searched; each bound is the exact value of that expression for an
explicit warp (identity, or the piecewise-linear map matching jump times).
Sup norms are exact: between merged breakpoints both A and B o w are linear,
so the supremum is attained at interval ends (right values at the start,
left limits at the end).
"""

import logging
from typing import List, Optional

import numpy as np

from ..errors import HorizonMismatchError
from ..processes.paths import CadlagPath, path_values
from .time_change import PiecewiseLinearMap

logger = logging.getLogger(__name__)


def identity_warp(horizon: float) -> PiecewiseLinearMap:
    return PiecewiseLinearMap([0.0, horizon], [0.0, horizon])


def jump_matching_warp(a: CadlagPath, b: CadlagPath) -> PiecewiseLinearMap:
    """
    Warp sending the i-th jump of `a` onto the i-th jump of `b`.

    Knots are (0, 0), every matched pair (T_a,i, T_b,i) for i up to the smaller
    jump count with both times strictly inside (0, T), and (T, T).
    """
    horizon = a.horizon
    matched = min(a.n_jumps, b.n_jumps)
    ta = a.jump_times[:matched]
    tb = b.jump_times[:matched]
    inside = (ta > 0) & (ta < horizon) & (tb > 0) & (tb < horizon)
    knots_t = np.concatenate(([0.0], ta[inside], [horizon]))
    knots_value = np.concatenate(([0.0], tb[inside], [horizon]))
    return PiecewiseLinearMap(knots_t, knots_value)


def _merged_grid(a: CadlagPath, b: CadlagPath, warp: PiecewiseLinearMap):
    horizon = a.horizon
    a_times = np.concatenate((a.t_start, warp.knots_t, [horizon]))
    b_times = b.t_start
    # Points coming from b keep their exact b-time
    pairs_a = np.column_stack((a_times, warp(a_times)))
    pairs_b = np.column_stack((warp.inverse(b_times), b_times))
    pairs = np.vstack((pairs_a, pairs_b))
    pairs = np.clip(pairs, 0.0, horizon)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs = pairs[order]
    keep = np.concatenate(([True], np.any(np.diff(pairs, axis=0) != 0, axis=1)))
    return pairs[keep, 0], pairs[keep, 1]


def sup_distance(a: CadlagPath, b: CadlagPath, warp: Optional[PiecewiseLinearMap] = None) -> float:
    """sup over [0, T] of |a(t) - b(warp(t))|, exact for piecewise-linear paths."""
    if a.horizon != b.horizon:
        raise HorizonMismatchError(f"horizons differ: {a.horizon!r} vs {b.horizon!r}")
    warp = warp if warp is not None else identity_warp(a.horizon)
    grid_a, grid_b = _merged_grid(a, b, warp)
    right = np.abs(path_values(a, grid_a) - path_values(b, grid_b))
    left = np.abs(path_values(a, grid_a[1:], left=True) - path_values(b, grid_b[1:], left=True))
    return float(max(right.max(), left.max() if left.size else 0.0))


def warped_distance(a: CadlagPath, b: CadlagPath, warp: PiecewiseLinearMap) -> float:
    """max(||warp - Id||, ||a - b o warp||)."""
    return max(warp.sup_deviation(), sup_distance(a, b, warp))


def _inverse(warp: PiecewiseLinearMap) -> PiecewiseLinearMap:
    return PiecewiseLinearMap(warp.knots_value, warp.knots_t)


def skorokhod_upper_bound(a: CadlagPath, b: CadlagPath) -> float:
    """
    Upper bound of d_S(a, b) over the identity and the jump-matching warp.

    Each warp is scored in both directions (w for (a, b), w^-1 for (b, a)),
    which makes the bound symmetric in its arguments.
    """
    if a.horizon != b.horizon:
        raise HorizonMismatchError(f"horizons differ: {a.horizon!r} vs {b.horizon!r}")
    candidates: List[PiecewiseLinearMap] = [identity_warp(a.horizon)]
    if a.n_jumps and b.n_jumps:
        candidates.append(jump_matching_warp(a, b))
    scores = [
        max(warped_distance(a, b, warp), warped_distance(b, a, _inverse(warp)))
        for warp in candidates
    ]
    logger.debug("skorokhod candidates %s", scores)
    return float(min(scores))
