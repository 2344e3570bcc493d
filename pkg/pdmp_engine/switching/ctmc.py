"""
Exact simulation of the switching chain Y_eps(t) = Y(t / eps).

Holding times in state i are exponential with rate -q_ii / eps and the next
state is drawn from row i of the jump matrix. Holding-time exponentials and
routing uniforms come from two separate sub-streams and are drawn in chunks;
both are consumed sequentially, so a path only depends on (generator,
initial law, eps, horizon, stream).
"""

import logging
from dataclasses import dataclass
from typing import List, Union

import numpy as np
import pandas as pd

from ..algebra.generator import ProbabilityVector, SwitchingGenerator, invariant_measure
from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import AbsorbingStateError, ConfigInvalidError, OutOfHorizonError
from .rng import RngStream, Substream

logger = logging.getLogger(__name__)

InitialState = Union[int, ProbabilityVector, None]


def _frozen(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SwitchPath:
    """
    One realization of Y_eps on [0, horizon].

    `event_times[j]` is the instant the chain enters `event_states[j]`; times
    are strictly increasing and lie in (0, horizon].
    """

    generator: SwitchingGenerator
    initial_state: int
    event_times: np.ndarray
    event_states: np.ndarray
    horizon: float
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "event_times", _frozen(self.event_times, float))
        object.__setattr__(self, "event_states", _frozen(self.event_states, np.int64))

    @property
    def speeds(self) -> np.ndarray:
        return self.generator.speeds

    @property
    def n_events(self) -> int:
        return len(self.event_times)

    def stretch_starts(self) -> np.ndarray:
        """Start time of every constant-state stretch, beginning with 0."""
        return np.concatenate(([0.0], self.event_times))

    def stretch_states(self) -> np.ndarray:
        """State held on every stretch, aligned with stretch_starts()."""
        return np.concatenate(([self.initial_state], self.event_states)).astype(np.int64)

    def to_frame(self) -> pd.DataFrame:
        """Switching events as a `t,new_state` table."""
        return pd.DataFrame({"t": self.event_times, "new_state": self.event_states})


def _draw_initial(gen: np.random.Generator, g: SwitchingGenerator, init: InitialState) -> int:
    if isinstance(init, (int, np.integer)):
        if not 0 <= int(init) < g.n_states:
            raise ConfigInvalidError(f"initial state {init!r} is not a row of the generator")
        return int(init)
    law = init if init is not None else invariant_measure(g)
    if len(law.weights) != g.n_states:
        raise ConfigInvalidError("initial law must give one weight per generator row")
    u = gen.random()
    index = int(np.searchsorted(np.cumsum(law.weights), u, side="right"))
    return min(index, g.n_states - 1)


def _jump_matrix(g: SwitchingGenerator, rates: np.ndarray) -> np.ndarray:
    jumps = g.q / rates[:, None]
    np.fill_diagonal(jumps, 0.0)
    return jumps


def _cycle_order(next_of: np.ndarray, start: int) -> np.ndarray:
    order = [start]
    while True:
        following = int(next_of[order[-1]])
        if following == start:
            return np.array(order, dtype=np.int64)
        order.append(following)


def simulate_switching(
    g: SwitchingGenerator,
    init: InitialState,
    epsilon: float,
    horizon: float,
    rng: Union[RngStream, np.random.Generator],
) -> SwitchPath:
    """
    Simulate Y_eps on [0, horizon].

    Args:
        g: Validated generator
        init: Initial row index, an initial law over the rows, or None for pi
        epsilon: Time-scale parameter (> 0); rates are divided by it
        horizon: Final time (> 0)
        rng: Stream (SWITCHING and ROUTING sub-streams are used) or a numpy Generator

    Returns:
        SwitchPath with all events in (0, horizon]
    """
    if not epsilon > 0:
        raise ConfigInvalidError(f"epsilon must be positive, got {epsilon!r}")
    if not horizon > 0:
        raise ConfigInvalidError(f"horizon must be positive, got {horizon!r}")
    if isinstance(rng, RngStream):
        clock = rng.generator(Substream.SWITCHING)
        router = rng.generator(Substream.ROUTING)
    else:
        clock = router = rng

    initial = _draw_initial(clock, g, init)
    n = g.n_states
    if n == 1:
        return SwitchPath(g, initial, [], [], horizon, epsilon)

    rates = g.exit_rates()
    if np.any(rates <= 0):
        absorbing = int(np.flatnonzero(rates <= 0)[0])
        raise AbsorbingStateError(f"state {absorbing} has zero exit rate")
    # Sojourns accumulate on the eps = 1 clock; eps only rescales event times
    mean_sojourn = 1.0 / rates
    jumps = _jump_matrix(g, rates)
    cumulative = np.cumsum(jumps, axis=1)
    deterministic_cycle = bool(np.all((jumps > 0).sum(axis=1) == 1))
    next_of = np.argmax(jumps, axis=1)
    cycle = _cycle_order(next_of, initial) if deterministic_cycle else None

    # First chunk: expected event count rounded up to a power of two
    expected = (horizon / epsilon) * float(rates.max())
    chunk = int(min(SIMULATION_CONFIG["rng"]["chunk_size"], 2 ** int(np.ceil(np.log2(1.25 * expected + 16)))))

    time_blocks: List[np.ndarray] = []
    state_blocks: List[np.ndarray] = []
    current_clock = 0.0
    state = initial
    position = 0

    while True:
        exponentials = clock.standard_exponential(chunk)
        if deterministic_cycle:
            states = cycle[(position + np.arange(chunk + 1)) % len(cycle)]
            position = (position + chunk) % len(cycle)
        else:
            uniforms = router.random(chunk)
            states = np.empty(chunk + 1, dtype=np.int64)
            states[0] = state
            for j in range(chunk):
                row = cumulative[states[j]]
                target = int(np.searchsorted(row, uniforms[j] * row[-1], side="right"))
                states[j + 1] = min(target, n - 1)
        clock_times = current_clock + np.cumsum(exponentials * mean_sojourn[states[:-1]])
        times = epsilon * clock_times
        count = int(np.count_nonzero(times <= horizon))
        time_blocks.append(times[:count])
        state_blocks.append(states[1:count + 1])
        if count < chunk:
            break
        current_clock = float(clock_times[-1])
        state = int(states[-1])
        chunk = SIMULATION_CONFIG["rng"]["chunk_size"]

    event_times = np.concatenate(time_blocks)
    event_states = np.concatenate(state_blocks)
    logger.debug("switching path: %d events on [0, %s] at eps=%s", len(event_times), horizon, epsilon)
    return SwitchPath(g, initial, event_times, event_states, horizon, epsilon)


def _check_time(path: SwitchPath, t: float) -> None:
    if not 0.0 <= t <= path.horizon:
        raise OutOfHorizonError(f"t={t!r} is outside [0, {path.horizon!r}]")


def state_at(path: SwitchPath, t: float, left: bool = False) -> int:
    """
    Row index of Y_eps(t), or of Y_eps(t-) when `left` is set.

    The path is cadlag: an event at t is already in force at t.
    """
    _check_time(path, t)
    side = "left" if left else "right"
    index = int(np.searchsorted(path.event_times, t, side=side))
    return path.initial_state if index == 0 else int(path.event_states[index - 1])


def states_at(path: SwitchPath, ts, left: bool = False) -> np.ndarray:
    """Vectorised state_at."""
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts.min() < 0.0 or ts.max() > path.horizon):
        raise OutOfHorizonError(f"evaluation times leave [0, {path.horizon!r}]")
    side = "left" if left else "right"
    index = np.searchsorted(path.event_times, ts, side=side)
    return path.stretch_states()[index]


def speed_at(path: SwitchPath, t: float, left: bool = False) -> float:
    return float(path.speeds[state_at(path, t, left=left)])


def occupation_measure(path: SwitchPath, t: float) -> np.ndarray:
    """
    Fraction of [0, t] spent in every state.

    Returns:
        Vector indexed by generator row; at t = 0 the Dirac mass at Y(0)
    """
    _check_time(path, t)
    n = path.generator.n_states
    if t == 0.0:
        occupation = np.zeros(n)
        occupation[path.initial_state] = 1.0
        return occupation
    inside = int(np.searchsorted(path.event_times, t, side="left"))
    edges = np.concatenate(([0.0], path.event_times[:inside], [t]))
    states = path.stretch_states()[: inside + 1]
    durations = np.diff(edges)
    return np.bincount(states, weights=durations, minlength=n) / t


def holding_times(path: SwitchPath, state: int) -> np.ndarray:
    """Completed sojourn durations in `state`; the sojourn cut by the horizon is left out."""
    starts = path.stretch_starts()
    durations = np.diff(starts)
    held = path.stretch_states()[:-1]
    return durations[held == state]


def has_event_in(path: SwitchPath, a: float, b: float) -> bool:
    """True when Y_eps switches at some time in (a, b]."""
    times = path.event_times
    return int(np.searchsorted(times, b, side="right")) > int(np.searchsorted(times, a, side="right"))
