"""
Generator algebra: intensity matrices, invariant measures and boundary kernels.
"""

from .generator import (
    SwitchingGenerator,
    ProbabilityVector,
    validate_generator,
    invariant_measure,
    tilted_generator,
    boundary_speed_measure,
    averaged_drift,
    pistar_first_moment,
    averaged_jump_kernel,
    averaged_mixture_kernel,
    averaged_hitting_times,
    next_averaged_hitting_time,
    generator_from_dict,
    stationary_on_speeds,
)
from .kernels import (
    JumpKernel,
    DiracKernel,
    UniformKernel,
    MixtureKernel,
    PushforwardKernel,
    kernel_from_dict,
)

__all__ = [
    "SwitchingGenerator",
    "ProbabilityVector",
    "validate_generator",
    "invariant_measure",
    "tilted_generator",
    "boundary_speed_measure",
    "averaged_drift",
    "pistar_first_moment",
    "averaged_jump_kernel",
    "averaged_mixture_kernel",
    "averaged_hitting_times",
    "next_averaged_hitting_time",
    "generator_from_dict",
    "stationary_on_speeds",
    "JumpKernel",
    "DiracKernel",
    "UniformKernel",
    "MixtureKernel",
    "PushforwardKernel",
    "kernel_from_dict",
]
