"""
Boundary jump kernels.

A jump kernel is the law of the post-jump location when the process hits the
boundary. Only Dirac, uniform, finite mixtures and pushforwards through a
monotone homeomorphism are supported; all of them admit exact single-uniform
inverse-CDF sampling, which the coupled simulations rely on.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy import integrate

from ..errors import ConfigInvalidError, KernelSupportViolationError


class JumpKernel(ABC):
    """Probability law on the real line used for post-jump locations."""

    @property
    @abstractmethod
    def lower_bound(self) -> float:
        """Smallest point of the support."""

    @property
    @abstractmethod
    def upper_bound(self) -> float:
        """Largest point of the support."""

    @abstractmethod
    def cdf(self, x: float) -> float:
        """P(X <= x)."""

    @abstractmethod
    def cdf_left(self, x: float) -> float:
        """P(X < x)."""

    @abstractmethod
    def ppf(self, u: float) -> float:
        """Inverse CDF evaluated at u in [0, 1)."""

    @abstractmethod
    def expect(self, f: Callable[[float], float]) -> float:
        """Expectation of f under the kernel."""

    @abstractmethod
    def pushforward(self, forward: Callable, inverse: Callable) -> "JumpKernel":
        """Image of the kernel under an increasing homeomorphism."""

    @abstractmethod
    def to_dict(self) -> Dict:
        """JSON-ready description."""

    def mean(self) -> float:
        return self.expect(lambda x: x)

    def atoms(self) -> Dict[float, float]:
        """Point masses of the kernel (empty for absolutely continuous laws)."""
        return {}

    def check_support(self, upper: float, lower: float = -np.inf) -> None:
        """
        Raise when the kernel puts mass outside [lower, upper].

        Args:
            upper: Largest admissible location (c - rho for boundary kernels)
            lower: Smallest admissible location
        """
        if self.upper_bound > upper:
            raise KernelSupportViolationError(
                f"kernel support reaches {self.upper_bound!r}, above the allowed {upper!r}"
            )
        if self.lower_bound < lower:
            raise KernelSupportViolationError(
                f"kernel support starts at {self.lower_bound!r}, below the allowed {lower!r}"
            )


@dataclass(frozen=True)
class DiracKernel(JumpKernel):
    """Point mass at a."""

    a: float

    @property
    def lower_bound(self) -> float:
        return self.a

    @property
    def upper_bound(self) -> float:
        return self.a

    def cdf(self, x: float) -> float:
        return 1.0 if x >= self.a else 0.0

    def cdf_left(self, x: float) -> float:
        return 1.0 if x > self.a else 0.0

    def ppf(self, u: float) -> float:
        return self.a

    def expect(self, f: Callable[[float], float]) -> float:
        return float(f(self.a))

    def pushforward(self, forward: Callable, inverse: Callable) -> JumpKernel:
        return DiracKernel(float(forward(self.a)))

    def atoms(self) -> Dict[float, float]:
        return {self.a: 1.0}

    def to_dict(self) -> Dict:
        return {"kind": "dirac", "a": self.a}


@dataclass(frozen=True)
class UniformKernel(JumpKernel):
    """Uniform law on [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ConfigInvalidError(f"uniform kernel needs a < b, got ({self.a}, {self.b})")

    @property
    def lower_bound(self) -> float:
        return self.a

    @property
    def upper_bound(self) -> float:
        return self.b

    def cdf(self, x: float) -> float:
        return float(min(1.0, max(0.0, (x - self.a) / (self.b - self.a))))

    def cdf_left(self, x: float) -> float:
        return self.cdf(x)

    def ppf(self, u: float) -> float:
        return self.a + u * (self.b - self.a)

    def expect(self, f: Callable[[float], float]) -> float:
        value, _ = integrate.quad(f, self.a, self.b)
        return value / (self.b - self.a)

    def pushforward(self, forward: Callable, inverse: Callable) -> JumpKernel:
        return PushforwardKernel(self, forward, inverse)

    def to_dict(self) -> Dict:
        return {"kind": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class MixtureKernel(JumpKernel):
    """Finite mixture sum_k weights[k] * components[k]."""

    weights: Tuple[float, ...]
    components: Tuple[JumpKernel, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.components) or not self.components:
            raise ConfigInvalidError("mixture needs one weight per component and at least one component")
        if any(w < 0 for w in self.weights):
            raise ConfigInvalidError(f"mixture weights must be nonnegative: {self.weights}")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ConfigInvalidError(f"mixture weights must sum to 1, got {sum(self.weights)!r}")

    @property
    def lower_bound(self) -> float:
        return min(c.lower_bound for w, c in zip(self.weights, self.components) if w > 0)

    @property
    def upper_bound(self) -> float:
        return max(c.upper_bound for w, c in zip(self.weights, self.components) if w > 0)

    def cdf(self, x: float) -> float:
        return sum(w * c.cdf(x) for w, c in zip(self.weights, self.components))

    def cdf_left(self, x: float) -> float:
        return sum(w * c.cdf_left(x) for w, c in zip(self.weights, self.components))

    def select(self, u: float) -> Tuple[int, float]:
        """
        Split a single uniform into a component index and a fresh uniform.

        Returns:
            (component index, uniform to feed that component's ppf)
        """
        cumulative = np.cumsum(self.weights)
        index = int(np.searchsorted(cumulative, u, side="right"))
        # Skip zero-weight components and guard against cumulative rounding below 1
        index = min(index, len(self.weights) - 1)
        while self.weights[index] == 0.0 and index > 0:
            index -= 1
        start = cumulative[index] - self.weights[index]
        local = (u - start) / self.weights[index]
        return index, float(min(max(local, 0.0), np.nextafter(1.0, 0.0)))

    def ppf(self, u: float) -> float:
        index, local = self.select(u)
        return self.components[index].ppf(local)

    def expect(self, f: Callable[[float], float]) -> float:
        return sum(w * c.expect(f) for w, c in zip(self.weights, self.components) if w > 0)

    def pushforward(self, forward: Callable, inverse: Callable) -> JumpKernel:
        return MixtureKernel(
            self.weights,
            tuple(c.pushforward(forward, inverse) for c in self.components),
        )

    def atoms(self) -> Dict[float, float]:
        merged: Dict[float, float] = {}
        for w, c in zip(self.weights, self.components):
            for point, mass in c.atoms().items():
                merged[point] = merged.get(point, 0.0) + w * mass
        return merged

    def to_dict(self) -> Dict:
        return {
            "kind": "mixture",
            "weights": list(self.weights),
            "components": [c.to_dict() for c in self.components],
        }


@dataclass(frozen=True)
class PushforwardKernel(JumpKernel):
    """Law of forward(V) for V ~ base, forward increasing with inverse `inverse`."""

    base: JumpKernel
    forward: Callable
    inverse: Callable

    @property
    def lower_bound(self) -> float:
        return float(self.forward(self.base.lower_bound))

    @property
    def upper_bound(self) -> float:
        return float(self.forward(self.base.upper_bound))

    def cdf(self, x: float) -> float:
        return self.base.cdf(float(self.inverse(x)))

    def cdf_left(self, x: float) -> float:
        return self.base.cdf_left(float(self.inverse(x)))

    def ppf(self, u: float) -> float:
        return float(self.forward(self.base.ppf(u)))

    def expect(self, f: Callable[[float], float]) -> float:
        return self.base.expect(lambda x: f(self.forward(x)))

    def pushforward(self, forward: Callable, inverse: Callable) -> JumpKernel:
        return PushforwardKernel(self, forward, inverse)

    def atoms(self) -> Dict[float, float]:
        return {float(self.forward(p)): m for p, m in self.base.atoms().items()}

    def to_dict(self) -> Dict:
        return {"kind": "pushforward", "base": self.base.to_dict()}


def kernel_from_dict(data: Dict) -> JumpKernel:
    """
    Build a kernel from its JSON description.

    Args:
        data: {"kind": "dirac", "a": ...}, {"kind": "uniform", "a": ..., "b": ...}
              or {"kind": "mixture", "weights": [...], "components": [...]}

    Returns:
        The corresponding JumpKernel
    """
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigInvalidError(f"kernel description must be an object with a 'kind': {data!r}")
    kind = data["kind"]
    try:
        if kind == "dirac":
            return DiracKernel(float(data["a"]))
        if kind == "uniform":
            return UniformKernel(float(data["a"]), float(data["b"]))
        if kind == "mixture":
            components: List[JumpKernel] = [kernel_from_dict(c) for c in data["components"]]
            return MixtureKernel(tuple(float(w) for w in data["weights"]), tuple(components))
    except KeyError as exc:
        raise ConfigInvalidError(f"kernel of kind {kind!r} is missing field {exc}") from exc
    raise ConfigInvalidError(f"unknown kernel kind {kind!r}")
