"""
Finite-dimensional laws of the averaged hitting sequence.

With a Dirac initial value and Dirac jump kernels, the joint law of the
first k averaged hitting times, their speed labels and the count p*(T)
collapses to a product of pi* weights times deterministic indicators:

    P(T*_i <= t_i, Z_i = x_i for i <= k, p*(T) = k)
        = prod_i pi*(1/x_i) * 1{(i c - sum_{j<i} u_j) E_pi* <= t_i for all i}
                             * 1{p*(T) = k}

where u_0 is the initial value and u_j (j >= 1) the Dirac location of the
kernel of x_j.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from ..algebra.generator import SwitchingGenerator, boundary_speed_measure, pistar_first_moment
from ..algebra.kernels import DiracKernel, JumpKernel
from ..errors import ConfigInvalidError, EmptyInputError, UnsupportedKernelError
from ..processes.paths import CadlagPath, count_jumps
from .summary import MonteCarloEstimate, estimate_from_samples

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LimitLawQuery:
    """Event {T*_i <= t_i, Z_i = x_i for i <= k} and {p*(T) = k}."""

    times: Tuple[float, ...]
    speeds: Tuple[float, ...]
    k: int
    horizon: float

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "speeds", tuple(float(x) for x in self.speeds))
        if self.k < 1:
            raise ConfigInvalidError(f"query needs k >= 1, got {self.k}")
        if len(self.times) != self.k or len(self.speeds) != self.k:
            raise ConfigInvalidError("query needs exactly k times and k speeds")
        if any(b < a for a, b in zip(self.times, self.times[1:])):
            raise ConfigInvalidError(f"query times must be nondecreasing: {self.times}")


def _dirac_location(kernel: JumpKernel, what: str) -> float:
    if not isinstance(kernel, DiracKernel):
        raise UnsupportedKernelError(f"{what} must be a Dirac kernel, got {type(kernel).__name__}")
    return kernel.a


def _hitting_sequence(
    c: float,
    u0: float,
    locations: Mapping[float, float],
    speeds: Sequence[float],
    first_moment: float,
) -> List[float]:
    """Averaged hitting times T*_1..T*_{k+1} for a given label sequence (last one from u_k)."""
    times = []
    total = 0.0
    previous = u0
    for i in range(len(speeds) + 1):
        total += c - previous
        times.append(total * first_moment)
        if i < len(speeds):
            previous = locations[speeds[i]]
    return times


def _probability(
    g: SwitchingGenerator,
    c: float,
    u0: float,
    locations: Mapping[float, float],
    times: Sequence[float],
    speeds: Sequence[float],
    horizon: float,
) -> float:
    pistar = boundary_speed_measure(g)
    first_moment = pistar_first_moment(g)
    hits = _hitting_sequence(c, u0, locations, speeds, first_moment)
    k = len(speeds)
    if any(hits[i] > times[i] for i in range(k)):
        return 0.0
    # p*(T) = k: the k-th hit happened, the (k+1)-th did not
    if (k > 0 and hits[k - 1] > horizon) or hits[k] <= horizon:
        return 0.0
    return math.prod(float(pistar.weights[g.index_of(x)]) for x in speeds)


def _locations(g: SwitchingGenerator, initial: JumpKernel, kernels: Mapping[float, JumpKernel]):
    u0 = _dirac_location(initial, "initial law")
    locations = {}
    for speed in g.speeds:
        if float(speed) not in kernels:
            raise ConfigInvalidError(f"no jump kernel for speed {float(speed)!r}")
        locations[float(speed)] = _dirac_location(kernels[float(speed)], f"kernel of speed {float(speed)!r}")
    return u0, locations


def limit_law_probability(
    g: SwitchingGenerator,
    c: float,
    initial: JumpKernel,
    kernels: Mapping[float, JumpKernel],
    query: LimitLawQuery,
) -> float:
    """
    Closed-form probability of a LimitLawQuery under the averaged process.

    Raises:
        UnsupportedKernelError: when the initial law or a kernel is not a Dirac mass
    """
    u0, locations = _locations(g, initial, kernels)
    for x in query.speeds:
        if x not in locations:
            raise ConfigInvalidError(f"query speed {x!r} is not a speed of the generator")
    return _probability(g, c, u0, locations, query.times, query.speeds, query.horizon)


def limit_law_partition_total(
    g: SwitchingGenerator,
    c: float,
    initial: JumpKernel,
    kernels: Mapping[float, JumpKernel],
    horizon: float,
) -> float:
    """
    Sum of the closed form over every jump count and label sequence with all t_i = infinity.

    Equals 1 for any valid Dirac data; the count p*(T) = 0 is included.
    """
    u0, locations = _locations(g, initial, kernels)
    first_moment = pistar_first_moment(g)
    smallest_step = min(c - u for u in list(locations.values()) + [u0]) * first_moment
    max_count = int(np.floor(horizon / smallest_step)) + 1
    speeds = [float(y) for y in g.speeds]
    terms = []
    for k in range(max_count + 1):
        unbounded = [math.inf] * k
        for labels in itertools.product(speeds, repeat=k):
            terms.append(_probability(g, c, u0, locations, unbounded, labels, horizon))
    return math.fsum(terms)


def query_event(path: CadlagPath, query: LimitLawQuery) -> bool:
    """Whether a simulated path realizes the query event."""
    if count_jumps(path, query.horizon) != query.k:
        return False
    for record, t, x in zip(path.jumps, query.times, query.speeds):
        if record.time > t or record.prejump_speed != x:
            return False
    return True


def limit_law_estimate(paths: Sequence[CadlagPath], query: LimitLawQuery) -> MonteCarloEstimate:
    """Empirical frequency of the query event over simulated paths."""
    if not paths:
        raise EmptyInputError("no paths")
    return estimate_from_samples([1.0 if query_event(p, query) else 0.0 for p in paths])
