"""Admissible kernels of the uniformly elliptic class and Isaacs families.

All kernels live in one space dimension. A kernel is

    K(z) = C_sigma * kappa(z) / |z|^(1 + sigma),    lambda <= kappa <= Lambda,

with C_sigma chosen so that kappa == 1 gives the fractional Laplacian whose
Fourier symbol is -|xi|^sigma.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ..errors import DomainError, UsageError
from .interfaces import MultiplierProfile
from .profiles import ConstantProfile, PerturbedProfile

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_COUNT = 256
DEFAULT_SAMPLE_RADIUS = 4.0


def _check_sigma(sigma: float) -> None:
    if not 0.0 < sigma < 2.0:
        raise DomainError(f"sigma must lie in (0, 2), got {sigma}")


def normalization_constant(sigma: float) -> float:
    """C_{sigma,1} = sigma 2^(sigma-1) Gamma((1+sigma)/2) / (sqrt(pi) Gamma(1 - sigma/2)).

    Equivalently 1 / int_R (1 - cos z) |z|^(-1-sigma) dz, so that the operator
    with kappa == 1 maps cos to -cos.
    """
    _check_sigma(sigma)
    return (sigma * 2.0 ** (sigma - 1.0) * special.gamma((1.0 + sigma) / 2.0)
            / (math.sqrt(math.pi) * special.gamma(1.0 - sigma / 2.0)))


def default_sample_points(radius: float = DEFAULT_SAMPLE_RADIUS,
                          count: int = DEFAULT_SAMPLE_COUNT) -> np.ndarray:
    """Deterministic log-spaced samples in (0, radius], mirrored to both signs."""
    positive = np.logspace(-6.0, math.log10(radius), count)
    return np.concatenate([-positive[::-1], positive])


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a sampled kernel condition."""
    passed: bool
    offender: Optional[float] = None
    offender_value: Optional[float] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class KernelSpec:
    """One admissible kernel: order, ellipticity band and multiplier profile."""
    sigma: float
    lambda_lo: float
    lambda_hi: float
    multiplier: MultiplierProfile
    limit_multiplier: Optional[float] = None
    modulus: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        _check_sigma(self.sigma)
        if not 0.0 < self.lambda_lo <= self.lambda_hi:
            raise DomainError(
                f"Ellipticity constants must satisfy 0 < lambda <= Lambda, "
                f"got ({self.lambda_lo}, {self.lambda_hi})"
            )

    @property
    def constant(self) -> float:
        return normalization_constant(self.sigma)

    def kappa(self, z):
        return self.multiplier(z)

    def describe(self) -> dict:
        info = {"sigma": self.sigma, "lambda": self.lambda_lo, "Lambda": self.lambda_hi}
        info.update(self.multiplier.describe())
        if self.limit_multiplier is not None:
            info["k"] = self.limit_multiplier
        return info


def make_frac_laplacian(sigma: float) -> KernelSpec:
    """The fractional Laplacian of order sigma: kappa == 1, lambda = Lambda = 1."""
    _check_sigma(sigma)
    return KernelSpec(sigma, 1.0, 1.0, ConstantProfile(1.0), limit_multiplier=None)


def make_constant_kernel(sigma: float, value: float, lambda_lo: float, lambda_hi: float) -> KernelSpec:
    """A scaled fractional Laplacian kappa == value inside the band [lambda, Lambda]."""
    return KernelSpec(sigma, lambda_lo, lambda_hi, ConstantProfile(value))


def make_perturbed_kernel(sigma: float, k: float, omega_exponent: float,
                          lambda_lo: float, lambda_hi: float,
                          amplitude: Optional[float] = None) -> KernelSpec:
    """kappa(z) = k + theta min(|z|,1)^a with its modulus attached as continuity data."""
    if not lambda_lo < k < lambda_hi:
        raise DomainError(f"Limit multiplier k must lie in (lambda, Lambda), got {k}")
    if amplitude is None:
        amplitude = 0.5 * (lambda_hi - k)
    profile = PerturbedProfile(k, omega_exponent, amplitude)
    return KernelSpec(sigma, lambda_lo, lambda_hi, profile,
                      limit_multiplier=k, modulus=profile.modulus)


def kernel_value(spec: KernelSpec, z: float) -> float:
    """K(z) = C_sigma kappa(z) |z|^(-1-sigma)."""
    if z == 0:
        raise DomainError("Kernel is singular at z = 0")
    return spec.constant * float(spec.kappa(z)) * abs(z) ** (-(1.0 + spec.sigma))


def check_ellipticity(spec: KernelSpec, sample_points: Sequence[float]) -> CheckResult:
    """Sampled check of lambda <= kappa(z) <= Lambda; reports the worst offender."""
    z = np.asarray(sample_points, dtype=float)
    if z.size == 0:
        raise UsageError("Ellipticity check needs at least one sample point")
    if np.any(z == 0):
        raise UsageError("Sample points must exclude 0")
    values = np.asarray(spec.kappa(z), dtype=float)
    excess = np.maximum(spec.lambda_lo - values, values - spec.lambda_hi)
    worst = int(np.argmax(excess))
    if excess[worst] > 0:
        message = (f"kappa({z[worst]:.6g}) = {values[worst]:.6g} outside "
                   f"[{spec.lambda_lo}, {spec.lambda_hi}]")
        logger.debug(message)
        return CheckResult(False, float(z[worst]), float(values[worst]), message)
    return CheckResult(True, message="ellipticity holds at all samples")


def check_continuity_modulus(spec: KernelSpec, sample_points: Sequence[float]) -> CheckResult:
    """Sampled check of |kappa(z) - k| <= omega(|z|) for 0 < |z| <= 1."""
    if spec.limit_multiplier is None or spec.modulus is None:
        raise UsageError("Continuity check needs limit_multiplier and modulus")
    z = np.asarray(sample_points, dtype=float)
    z = z[(z != 0) & (np.abs(z) <= 1.0)]
    if z.size == 0:
        raise UsageError("Continuity check needs samples with 0 < |z| <= 1")
    deviation = np.abs(np.asarray(spec.kappa(z), dtype=float) - spec.limit_multiplier)
    bound = np.asarray(spec.modulus(np.abs(z)), dtype=float) * np.ones_like(z)
    # relative slack absorbs rounding in kappa - k
    excess = deviation - bound - 1e-12 * max(1.0, abs(spec.limit_multiplier))
    worst = int(np.argmax(excess))
    if excess[worst] > 0:
        message = (f"|kappa({z[worst]:.6g}) - k| = {deviation[worst]:.6g} exceeds "
                   f"omega = {bound[worst]:.6g}")
        return CheckResult(False, float(z[worst]), float(deviation[worst]), message)
    return CheckResult(True, message="continuity modulus holds at all samples")


@dataclass(frozen=True)
class IsaacsOperator:
    """inf over i of sup over j of the linear operators with kernels K_ij."""
    kernels: Tuple[Tuple[KernelSpec, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.kernels)
        object.__setattr__(self, "kernels", rows)
        if len(rows) == 0 or any(len(row) == 0 for row in rows):
            raise UsageError("Isaacs family needs m >= 1 rows and n >= 1 columns")
        if len({len(row) for row in rows}) != 1:
            raise UsageError("Isaacs family rows must have equal length")
        first = rows[0][0]
        for spec in self.entries():
            shared = (spec.sigma, spec.lambda_lo, spec.lambda_hi)
            if shared != (first.sigma, first.lambda_lo, first.lambda_hi):
                raise DomainError("All kernels of an Isaacs family must share sigma, lambda and Lambda")

    @classmethod
    def single(cls, spec: KernelSpec) -> "IsaacsOperator":
        return cls(((spec,),))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.kernels), len(self.kernels[0])

    @property
    def sigma(self) -> float:
        return self.kernels[0][0].sigma

    @property
    def lambda_lo(self) -> float:
        return self.kernels[0][0].lambda_lo

    @property
    def lambda_hi(self) -> float:
        return self.kernels[0][0].lambda_hi

    def entries(self) -> Iterator[KernelSpec]:
        for row in self.kernels:
            yield from row

    def limit_multipliers(self) -> np.ndarray:
        """The k_ij matrix of the local limit; requires continuity data on every entry."""
        values: List[List[float]] = []
        for row in self.kernels:
            if any(spec.limit_multiplier is None for spec in row):
                raise UsageError("Every kernel needs a limit multiplier for the local limit")
            values.append([spec.limit_multiplier for spec in row])
        return np.asarray(values, dtype=float)
