"""Kernel module initialization."""

from .factory import KernelFamilyFactory, build_operator, get_kernel
from .interfaces import MultiplierProfile
from .spec import (CheckResult, IsaacsOperator, KernelSpec, check_continuity_modulus,
                   check_ellipticity, default_sample_points, kernel_value,
                   make_constant_kernel, make_frac_laplacian, make_perturbed_kernel,
                   normalization_constant)

__all__ = [
    "KernelFamilyFactory",
    "build_operator",
    "get_kernel",
    "MultiplierProfile",
    "CheckResult",
    "IsaacsOperator",
    "KernelSpec",
    "check_continuity_modulus",
    "check_ellipticity",
    "default_sample_points",
    "kernel_value",
    "make_constant_kernel",
    "make_frac_laplacian",
    "make_perturbed_kernel",
    "normalization_constant",
]
