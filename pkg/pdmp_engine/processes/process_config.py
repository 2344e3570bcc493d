"""
Full description of one boundary-constrained process.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Mapping, Optional

import numpy as np

from ..algebra.generator import SwitchingGenerator, validate_generator
from ..algebra.kernels import JumpKernel
from ..errors import ConfigInvalidError, KernelSupportViolationError

if TYPE_CHECKING:
    from ..flows.homeomorphism import FlowSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProcessConfig:
    """
    Boundary c, initial law of xi_0, jump kernels nu_y, time scale eps, horizon T and gap rho.

    When `flow` is set the boundary, kernels and initial law are expressed in
    the original x-coordinates of the flow and must live in [m, c - rho].
    """

    generator: SwitchingGenerator
    boundary: float
    initial: JumpKernel
    kernels: Mapping[float, JumpKernel]
    epsilon: float
    horizon: float
    rho: float
    # Row index of Y(0); None draws it from pi
    initial_speed: Optional[int] = None
    flow: Optional["FlowSpec"] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kernels", {float(y): k for y, k in self.kernels.items()})
        validate_process_config(self)

    def kernel_for(self, speed: float) -> JumpKernel:
        return self.kernels[float(speed)]

    @property
    def max_speed(self) -> float:
        return float(self.generator.speeds.max())

    def replace(self, **changes) -> "ProcessConfig":
        """Copy with some fields changed; the copy is validated again."""
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict:
        data = {
            "generator": self.generator.to_dict(),
            "boundary": self.boundary,
            "initial": self.initial.to_dict(),
            "kernels": {repr(y): k.to_dict() for y, k in self.kernels.items()},
            "epsilon": self.epsilon,
            "horizon": self.horizon,
            "rho": self.rho,
            "initial_speed": self.initial_speed,
        }
        if self.flow is not None:
            data["flow"] = self.flow.to_dict()
        return data


def validate_process_config(cfg: ProcessConfig) -> None:
    """
    Check every ProcessConfig invariant.

    Raises:
        ConfigInvalidError (or KernelSupportViolationError) naming the broken invariant
    """
    validate_generator(cfg.generator)
    if not np.isfinite(cfg.boundary):
        raise ConfigInvalidError(f"boundary must be finite, got {cfg.boundary!r}")
    if not 0.0 < cfg.epsilon <= 1.0:
        raise ConfigInvalidError(f"epsilon must lie in (0, 1], got {cfg.epsilon!r}")
    if not (cfg.horizon > 0 and np.isfinite(cfg.horizon)):
        raise ConfigInvalidError(f"horizon must be positive and finite, got {cfg.horizon!r}")
    if not cfg.rho > 0:
        raise ConfigInvalidError(f"gap rho must be positive, got {cfg.rho!r}")
    if cfg.initial_speed is not None and not 0 <= cfg.initial_speed < cfg.generator.n_states:
        raise ConfigInvalidError(f"initial speed index {cfg.initial_speed!r} is not a generator row")

    missing = [float(y) for y in cfg.generator.speeds if float(y) not in cfg.kernels]
    if missing:
        raise ConfigInvalidError(f"no jump kernel declared for speeds {missing}")
    extra = sorted(set(cfg.kernels) - {float(y) for y in cfg.generator.speeds})
    if extra:
        raise ConfigInvalidError(f"jump kernels declared for unknown speeds {extra}")

    lower = cfg.flow.m if cfg.flow is not None else -np.inf
    for speed, kernel in cfg.kernels.items():
        try:
            kernel.check_support(cfg.boundary - cfg.rho, lower)
        except KernelSupportViolationError as exc:
            raise KernelSupportViolationError(f"kernel of speed {speed!r}: {exc}") from exc

    if not cfg.initial.upper_bound < cfg.boundary:
        raise ConfigInvalidError(
            f"initial law reaches {cfg.initial.upper_bound!r}, not below the boundary {cfg.boundary!r}"
        )
    if cfg.flow is not None:
        if cfg.initial.lower_bound < cfg.flow.m:
            raise KernelSupportViolationError(
                f"initial law starts at {cfg.initial.lower_bound!r}, below m={cfg.flow.m!r}"
            )
        if cfg.flow.c != cfg.boundary:
            raise ConfigInvalidError(f"flow boundary {cfg.flow.c!r} differs from {cfg.boundary!r}")


def jump_count_bound(cfg: ProcessConfig) -> float:
    """
    Deterministic bound on the number of boundary hits in [0, T].

    Every restart from a kernel needs at least rho / max speed time to reach c,
    giving T * max speed / rho. An initial law reaching above c - rho can add
    one early hit.
    """
    bound = cfg.horizon * cfg.max_speed / cfg.rho
    if cfg.initial.upper_bound > cfg.boundary - cfg.rho:
        bound += 1.0
    return bound
