"""
Switching generator algebra.

Validates intensity matrices of the speed chain and computes the closed-form
limit objects of the fast-switching average: the invariant measure pi, the tilted
generator V^-1 Q and its invariant measure pi*, the averaged drift, the first
moment of pi*, the averaged boundary kernel and the averaged hitting times.

All functions are pure; generators and probability vectors are immutable.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse.csgraph import connected_components

from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import (
    ConfigInvalidError,
    MissingKernelError,
    NegativeOffDiagonalError,
    NonpositiveDriftError,
    NonpositiveSpeedError,
    ReducibleError,
    RowSumNonzeroError,
    SingularSystemError,
    SpeedOrderError,
    XiAboveBoundaryError,
)
from .kernels import JumpKernel, MixtureKernel

logger = logging.getLogger(__name__)

TOLERANCES = SIMULATION_CONFIG["tolerances"]


def _frozen(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise ConfigInvalidError(f"expected a {ndim}-dimensional array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SwitchingGenerator:
    """
    Finite speed set with the intensity matrix of the chain moving between speeds.

    Row i of `q` holds the jump intensities out of speeds[i]. Construction does
    not validate; call validate_generator (ProcessConfig does it for you).
    """

    speeds: np.ndarray
    q: np.ndarray
    # Source generator when this one was produced by tilted_generator
    tilted_from: Optional["SwitchingGenerator"] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "speeds", _frozen(self.speeds, 1))
        object.__setattr__(self, "q", _frozen(self.q, 2))

    @property
    def n_states(self) -> int:
        return len(self.speeds)

    def index_of(self, speed: float) -> int:
        """Row index of a speed (exact float match)."""
        matches = np.flatnonzero(self.speeds == speed)
        if len(matches) == 0:
            raise LookupError(f"speed {speed!r} is not in {list(self.speeds)}")
        return int(matches[0])

    def exit_rates(self) -> np.ndarray:
        return -np.diag(self.q)

    def to_dict(self) -> Dict:
        return {"speeds": self.speeds.tolist(), "q": self.q.tolist()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SwitchingGenerator):
            return NotImplemented
        return np.array_equal(self.speeds, other.speeds) and np.array_equal(self.q, other.q)

    def __hash__(self) -> int:
        return hash((self.speeds.tobytes(), self.q.tobytes()))


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Weights over an explicit finite support."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "support", _frozen(self.support, 1))
        object.__setattr__(self, "weights", _frozen(self.weights, 1))
        if self.support.shape != self.weights.shape:
            raise ConfigInvalidError("support and weights must have the same length")
        if np.any(self.weights < 0):
            raise ConfigInvalidError(f"weights must be nonnegative: {self.weights}")
        if abs(math.fsum(self.weights) - 1.0) > TOLERANCES["probability_sum"]:
            raise ConfigInvalidError(f"weights must sum to 1, got {math.fsum(self.weights)!r}")
        if len(np.unique(self.support)) != len(self.support):
            raise ConfigInvalidError(f"support points must be distinct: {self.support}")

    def as_dict(self) -> Dict[float, float]:
        return {float(s): float(w) for s, w in zip(self.support, self.weights)}

    def weight_of(self, point: float) -> float:
        return self.as_dict().get(float(point), 0.0)

    def mean(self) -> float:
        return math.fsum(self.support * self.weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbabilityVector):
            return NotImplemented
        return np.array_equal(self.support, other.support) and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.support.tobytes(), self.weights.tobytes()))


def validate_generator(g: SwitchingGenerator) -> None:
    """
    Check every SwitchingGenerator invariant.

    Raises:
        NonpositiveSpeedError, SpeedOrderError, NegativeOffDiagonalError,
        RowSumNonzeroError or ReducibleError naming the violated invariant.
    """
    speeds, q = g.speeds, g.q
    n = len(speeds)
    if n == 0:
        raise SpeedOrderError("a generator needs at least one speed")
    if q.shape != (n, n):
        raise ConfigInvalidError(f"intensity matrix must be {n}x{n}, got {q.shape}")

    if np.any(speeds <= 0) or not np.all(np.isfinite(speeds)):
        raise NonpositiveSpeedError(f"speeds must be finite and strictly positive: {speeds.tolist()}")
    if n > 1:
        steps = np.diff(speeds)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise SpeedOrderError(f"speeds must be distinct and strictly monotone: {speeds.tolist()}")

    off_diagonal = q[~np.eye(n, dtype=bool)]
    if np.any(off_diagonal < 0):
        raise NegativeOffDiagonalError(f"off-diagonal intensities must be >= 0: {q.tolist()}")

    row_sums = q.sum(axis=1)
    scale = np.maximum(1.0, np.abs(q).max(axis=1))
    bad_rows = np.flatnonzero(np.abs(row_sums) > TOLERANCES["row_sum"] * scale)
    if len(bad_rows):
        i = int(bad_rows[0])
        raise RowSumNonzeroError(f"row {i} of the intensity matrix sums to {row_sums[i]!r}, not 0")

    adjacency = (q > TOLERANCES["irreducibility_threshold"]) & ~np.eye(n, dtype=bool)
    n_components, _ = connected_components(adjacency, directed=True, connection="strong")
    if n_components != 1:
        raise ReducibleError(
            f"intensity matrix is reducible: {n_components} strongly connected components"
        )


def invariant_measure(g: SwitchingGenerator) -> ProbabilityVector:
    """
    Stationary law pi of the chain (pi Q = 0, sum pi = 1).

    Solved by one dense LU factorisation of Q^T with its last equation replaced
    by the normalisation row.

    Returns:
        ProbabilityVector on the speeds, in row order
    """
    n = g.n_states
    if n == 1:
        return ProbabilityVector(g.speeds, [1.0])

    system = g.q.T.copy()
    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0

    lu, piv = lu_factor(system, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= TOLERANCES["min_relative_pivot"] * max(pivots.max(), 1.0):
        raise SingularSystemError(
            f"stationary system is numerically rank deficient (smallest pivot {pivots.min():.3e})"
        )
    pi = lu_solve((lu, piv), rhs)

    # Round-off can leave tiny negative entries
    pi = np.where(np.abs(pi) < 1e-15, 0.0, pi)
    if np.any(pi < 0):
        raise SingularSystemError(f"stationary solve produced negative weights: {pi}")
    pi = pi / math.fsum(pi)

    residual = np.abs(pi @ g.q).max()
    if residual > TOLERANCES["stationary_residual"] * max(1.0, np.abs(g.q).max()):
        raise SingularSystemError(f"stationary residual {residual:.3e} exceeds tolerance")
    logger.debug("invariant measure %s for speeds %s", pi.tolist(), g.speeds.tolist())
    return ProbabilityVector(g.speeds, pi)


def tilted_generator(g: SwitchingGenerator) -> SwitchingGenerator:
    """
    The generator V^-1 Q on the reciprocal speeds, rows kept in input order.

    Tilting is an exact involution: tilting a tilted generator returns its source.
    """
    if g.tilted_from is not None:
        return g.tilted_from
    tilted = SwitchingGenerator(
        speeds=1.0 / g.speeds,
        q=g.q / g.speeds[:, None],
        tilted_from=g,
    )
    validate_generator(tilted)
    return tilted


def boundary_speed_measure(g: SwitchingGenerator) -> ProbabilityVector:
    """
    pi*, the invariant measure of V^-1 Q, on support 1/y indexed like the speeds.
    """
    return invariant_measure(tilted_generator(g))


def averaged_drift(g: SwitchingGenerator) -> float:
    """Sum over speeds of y * pi(y): the slope of the averaged process."""
    pi = invariant_measure(g)
    return math.fsum(g.speeds * pi.weights)


def pistar_first_moment(g: SwitchingGenerator) -> float:
    """E_{pi*} = sum of (1/y) pi*(1/y); equals 1 / averaged_drift(g)."""
    return boundary_speed_measure(g).mean()


def averaged_jump_kernel(
    g: SwitchingGenerator,
    kernels: Mapping[float, JumpKernel],
) -> JumpKernel:
    """
    Boundary law of the averaged process: the mixture of nu_y with weights pi*(1/y).

    Args:
        g: Switching generator
        kernels: Jump kernel for every speed

    Returns:
        MixtureKernel in speed row order (or the common kernel when all coincide)
    """
    components: List[JumpKernel] = []
    for speed in g.speeds:
        if float(speed) not in kernels:
            raise MissingKernelError(f"no jump kernel declared for speed {float(speed)!r}")
        components.append(kernels[float(speed)])
    if all(component == components[0] for component in components):
        return components[0]
    pistar = boundary_speed_measure(g)
    return MixtureKernel(tuple(float(w) for w in pistar.weights), tuple(components))


def averaged_mixture_kernel(
    g: SwitchingGenerator,
    kernels: Mapping[float, JumpKernel],
) -> MixtureKernel:
    """Same law as averaged_jump_kernel but always as an explicit mixture over speeds."""
    components = []
    for speed in g.speeds:
        if float(speed) not in kernels:
            raise MissingKernelError(f"no jump kernel declared for speed {float(speed)!r}")
        components.append(kernels[float(speed)])
    pistar = boundary_speed_measure(g)
    return MixtureKernel(tuple(float(w) for w in pistar.weights), tuple(components))


def next_averaged_hitting_time(previous: float, c: float, xi: float, drift: float) -> float:
    """One step of T*_k = T*_{k-1} + (c - xi_{k-1}) / drift."""
    return previous + (c - xi) / drift


def averaged_hitting_times(drift: float, c: float, xi: Sequence[float]) -> List[float]:
    """
    Hitting times of the averaged process for given post-jump values.

    Args:
        drift: Averaged slope, > 0
        c: Boundary
        xi: xi_0, xi_1, ... (all < c)

    Returns:
        [T*_1, T*_2, ...], one time per entry of xi
    """
    if not drift > 0:
        raise NonpositiveDriftError(f"averaged drift must be positive, got {drift!r}")
    times: List[float] = []
    previous = 0.0
    for value in xi:
        if not value < c:
            raise XiAboveBoundaryError(f"post-jump value {value!r} is not below the boundary {c!r}")
        previous = next_averaged_hitting_time(previous, c, value, drift)
        times.append(previous)
    return times


def generator_from_dict(data: Dict) -> SwitchingGenerator:
    """Build and validate a generator from {"speeds": [...], "q": [[...], ...]}."""
    try:
        g = SwitchingGenerator(speeds=data["speeds"], q=data["q"])
    except KeyError as exc:
        raise ConfigInvalidError(f"generator description is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigInvalidError(f"generator description is malformed: {exc}") from exc
    validate_generator(g)
    return g


def stationary_on_speeds(g: SwitchingGenerator, law: Optional[ProbabilityVector] = None) -> ProbabilityVector:
    """
    Re-index a row-ordered law (pi* by default) on the speeds themselves.

    Empirical pre-jump speed laws live on the speeds; pi* lives on 1/y. Because
    pi* is stored in row order, moving it onto the speeds is a relabelling.
    """
    law = law if law is not None else boundary_speed_measure(g)
    return ProbabilityVector(g.speeds, law.weights)

