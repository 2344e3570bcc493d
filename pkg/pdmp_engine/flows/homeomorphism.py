"""
Separated flows dx/dt = alpha(y) F(x) on (m, c) and their linearising map G.

G(x) = integral from m to x of du / F(u) turns the flow into constant speed
alpha(y). Only closed-form pairs (G, G^-1) are supported so event times stay
exact. Every pair is a module-level function bound with functools.partial so
specs and the kernels pushed through them can be pickled to worker processes.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Dict, Mapping, Optional

import numpy as np

from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import ConfigInvalidError, NonIntegrableFError, RoundTripFailureError

logger = logging.getLogger(__name__)

TOLERANCES = SIMULATION_CONFIG["tolerances"]


class FlowKind(Enum):
    """Shape family of F."""

    QUADRATIC = "quadratic"  # F(x) = x^2
    TABLE = "table"  # F given through a closed-form (G, G^-1) pair


# Quadratic: G(x) = 1/m - 1/x
def quadratic_forward(x, m: float):
    return 1.0 / m - 1.0 / np.asarray(x, dtype=float)


def quadratic_inverse(z, m: float):
    return 1.0 / (1.0 / m - np.asarray(z, dtype=float))


def quadratic_shape(x):
    return np.asarray(x, dtype=float) ** 2


# F = 1: G(x) = x - m
def shift_forward(x, m: float):
    return np.asarray(x, dtype=float) - m


def shift_inverse(z, m: float):
    return np.asarray(z, dtype=float) + m


def unit_shape(x, m: float):
    return np.ones_like(np.asarray(x, dtype=float))


# F(x) = 1 + x - m: G(x) = log(1 + x - m)
def log1p_forward(x, m: float):
    return np.log1p(np.asarray(x, dtype=float) - m)


def log1p_inverse(z, m: float):
    return m + np.expm1(np.asarray(z, dtype=float))


def log1p_shape(x, m: float):
    return 1.0 + np.asarray(x, dtype=float) - m


TABLE_FAMILIES = {
    "unit": (shift_forward, shift_inverse, unit_shape),
    "log1p": (log1p_forward, log1p_inverse, log1p_shape),
}


@dataclass(frozen=True)
class FlowSpec:
    """
    Flow x' = alpha(y) F(x) on (m, c).

    For kind TABLE, `forward`/`inverse` are the closed-form G and G^-1 and
    `shape` (optional) is F itself, used only for diagnostics.
    """

    m: float
    c: float
    alpha: Mapping[float, float]
    kind: FlowKind = FlowKind.QUADRATIC
    forward: Optional[Callable] = field(default=None, compare=False, repr=False)
    inverse: Optional[Callable] = field(default=None, compare=False, repr=False)
    shape: Optional[Callable] = field(default=None, compare=False, repr=False)
    family: str = "quadratic"

    def __post_init__(self):
        object.__setattr__(self, "alpha", {float(y): float(a) for y, a in self.alpha.items()})
        if not self.m < self.c:
            raise ConfigInvalidError(f"flow needs m < c, got m={self.m!r}, c={self.c!r}")
        bad = {y: a for y, a in self.alpha.items() if not (a > 0 and math.isfinite(a))}
        if bad:
            raise ConfigInvalidError(f"alpha must be positive and finite, got {bad}")
        if self.kind is FlowKind.TABLE and (self.forward is None or self.inverse is None):
            raise ConfigInvalidError("a table flow needs both G and its inverse")

    def velocity(self, x, speed: float):
        """alpha(speed) * F(x), when F is known."""
        if self.kind is FlowKind.QUADRATIC:
            return self.alpha[float(speed)] * quadratic_shape(x)
        if self.shape is None:
            raise ConfigInvalidError(f"flow family {self.family!r} does not declare F")
        return self.alpha[float(speed)] * self.shape(x)

    def to_dict(self) -> Dict:
        return {
            "m": self.m,
            "c": self.c,
            "alpha": {repr(y): a for y, a in self.alpha.items()},
            "kind": self.kind.value,
            "family": self.family,
        }


def table_flow(family: str, m: float, c: float, alpha: Mapping[float, float]) -> FlowSpec:
    """FlowSpec for one of the ready-made closed-form families ("unit", "log1p")."""
    if family not in TABLE_FAMILIES:
        raise ConfigInvalidError(f"unknown flow family {family!r}; known: {sorted(TABLE_FAMILIES)}")
    forward, inverse, shape = TABLE_FAMILIES[family]
    return FlowSpec(
        m=m, c=c, alpha=alpha, kind=FlowKind.TABLE,
        forward=partial(forward, m=m), inverse=partial(inverse, m=m), shape=partial(shape, m=m),
        family=family,
    )


@dataclass(frozen=True)
class Homeomorphism:
    """Increasing bijection G: (m, c) -> (0, G(c)) with its inverse."""

    forward: Callable
    inverse: Callable
    m: float
    c: float

    @property
    def upper(self) -> float:
        """G(c)."""
        return float(self.forward(self.c))

    def __call__(self, x):
        return self.forward(x)


def build_homeomorphism(spec: FlowSpec) -> Homeomorphism:
    """
    G and G^-1 for a flow, checked on a test grid.

    Raises:
        NonIntegrableFError: G(c) is not finite
        RoundTripFailureError: G^-1 o G or G o G^-1 misses the identity, or G is not increasing
    """
    if spec.kind is FlowKind.QUADRATIC:
        if not spec.m > 0:
            raise NonIntegrableFError(f"quadratic flow needs m > 0 for 1/x^2 to be integrable, got m={spec.m!r}")
        homeo = Homeomorphism(partial(quadratic_forward, m=spec.m), partial(quadratic_inverse, m=spec.m), spec.m, spec.c)
    else:
        homeo = Homeomorphism(spec.forward, spec.inverse, spec.m, spec.c)

    upper = homeo.upper
    if not (math.isfinite(upper) and upper > 0):
        raise NonIntegrableFError(f"G(c) = {upper!r} is not a positive finite number")

    n = TOLERANCES["round_trip_grid"]
    tolerance = TOLERANCES["round_trip"]
    xs = np.linspace(spec.m, spec.c, n + 2)[1:-1]
    zs = np.linspace(0.0, upper, n + 2)[1:-1]
    g_xs = np.asarray(homeo.forward(xs), dtype=float)
    if np.any(np.diff(g_xs) <= 0):
        raise RoundTripFailureError("G is not strictly increasing on the test grid")
    x_error = np.max(np.abs(homeo.inverse(g_xs) - xs) / np.maximum(1.0, np.abs(xs)))
    z_error = np.max(np.abs(homeo.forward(homeo.inverse(zs)) - zs) / np.maximum(1.0, np.abs(zs)))
    if max(x_error, z_error) > tolerance:
        raise RoundTripFailureError(
            f"G round trip misses the identity by {max(x_error, z_error):.3e} (> {tolerance:g})"
        )
    logger.debug("homeomorphism %s on (%s, %s): G(c)=%s", spec.family, spec.m, spec.c, upper)
    return homeo


def quadratic_trajectory(x0: float, a: float, t):
    """Solution of x' = a x^2 from x0: x0 / (1 - a x0 t)."""
    return x0 / (1.0 - a * x0 * np.asarray(t, dtype=float))


def quadratic_hit_time(x0: float, a: float, c: float) -> float:
    """Time for x' = a x^2 to go from x0 to c: (1/x0 - 1/c) / a."""
    return (1.0 / x0 - 1.0 / c) / a
