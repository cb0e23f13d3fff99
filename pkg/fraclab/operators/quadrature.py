"""Quadrature for symmetric nonlocal operators on a uniform grid.

For a symmetric kernel the principal value integral equals

    I_K(u, x) = int_0^inf [u(x+z) + u(x-z) - 2u(x)] K(z) dz.

Write du(z) = u(x+z) + u(x-z) - 2u(x) and g(z) = du(z) / z^2. On the grid
offsets z_k = k h we interpolate g piecewise linearly and integrate it exactly
against C kappa z^(1-sigma), with kappa frozen at cell midpoints. On the
inner cell [0, delta] g is replaced by the central second difference
du(h) / h^2 and multiplied by the moment C int_0^delta kappa z^(1-sigma) dz.
Beyond the far cutoff both x + z and x - z lie outside [-R, R] and the
exterior formula is integrated adaptively.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate

from ..errors import DomainError
from ..grid import Grid, GridFunction
from ..kernels import KernelSpec, normalization_constant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureScheme:
    """Discretization parameters shared by all evaluators.

    delta_inner and far_cutoff default to h and 2R of the grid in use.
    normalization_scale multiplies C_sigma and exists for fault injection.
    """
    delta_inner: Optional[float] = None
    far_cutoff: Optional[float] = None
    tail_tol: float = 1e-10
    tail_limit: int = 200
    normalization_scale: float = 1.0

    def __post_init__(self):
        if self.delta_inner is not None and not 0.0 < self.delta_inner <= 1.0:
            raise DomainError(f"delta_inner must lie in (0, 1], got {self.delta_inner}")
        if self.tail_tol <= 0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.normalization_scale <= 0:
            raise DomainError("normalization_scale must be positive")

    def inner_offset(self, grid: Grid) -> int:
        """Inner cutoff as a whole number of grid steps (at least one)."""
        delta = grid.h if self.delta_inner is None else self.delta_inner
        return max(1, int(round(delta / grid.h)))

    def far_offset(self, grid: Grid) -> int:
        far = 2.0 * grid.R if self.far_cutoff is None else self.far_cutoff
        if far < 2.0 * grid.R - 1e-12:
            raise DomainError(f"far_cutoff must be at least 2R = {2.0 * grid.R}, got {far}")
        return int(round(far / grid.h))


def _power_integral(a: np.ndarray, b: np.ndarray, e: float) -> np.ndarray:
    """int_a^b z^(e-1) dz for 0 <= a < b and e > 0, stable as e -> 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_term = np.where(a > 0, a ** e * np.expm1(e * np.log(b / np.where(a > 0, a, 1.0))) / e, 0.0)
    return np.where(a > 0, ratio_term, b ** e / e)


def _quad(func, lo, hi, scheme: QuadratureScheme, points=None, **kwargs) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        if points and np.isfinite(hi):
            value, error = integrate.quad(func, lo, hi, points=points, epsabs=scheme.tail_tol,
                                          epsrel=scheme.tail_tol, limit=scheme.tail_limit, **kwargs)
        else:
            value, error = integrate.quad(func, lo, hi, epsabs=scheme.tail_tol,
                                          epsrel=scheme.tail_tol, limit=scheme.tail_limit, **kwargs)
    if caught:
        logger.warning(f"Adaptive quadrature on [{lo:g}, {hi:g}] hit its limit (error estimate {error:.2e})")
    return float(value)


def kernel_constant(spec: KernelSpec, scheme: QuadratureScheme) -> float:
    return spec.constant * scheme.normalization_scale


def inner_moment(spec: KernelSpec, delta: float, scheme: QuadratureScheme) -> float:
    """C int_0^delta kappa(z) z^(1-sigma) dz, i.e. half the second moment of K on B_delta."""
    C = kernel_constant(spec, scheme)
    e = 2.0 - spec.sigma
    value = spec.multiplier.constant_value
    if value is not None:
        return C * value * float(_power_integral(0.0, delta, e))
    points = spec.multiplier.breakpoints(0.0, delta)
    integral = _quad(lambda z: float(spec.kappa(z)) * z ** (1.0 - spec.sigma), 0.0, delta, scheme, points)
    return C * integral


def tail_mass(spec: KernelSpec, cutoff: float, scheme: QuadratureScheme) -> float:
    """int_cutoff^inf K(z) dz."""
    C = kernel_constant(spec, scheme)
    value = spec.multiplier.constant_value
    if value is not None:
        return C * value * cutoff ** (-spec.sigma) / spec.sigma
    return C * _quad(lambda z: float(spec.kappa(z)) * z ** (-1.0 - spec.sigma), cutoff, np.inf, scheme)


@dataclass(frozen=True, eq=False)
class Stencil:
    """Offset weights w_k (k = 0..K, w_0 = 0) with I ~ sum_k w_k du_k + tail.

    ``inner`` is the moment of the inner region. When the stencil was built
    with ``fold_inner`` it is already included in w_1 through the second
    difference du_1 / h^2.
    """
    spec: KernelSpec
    h: float
    first_offset: int
    far_offset: int
    weights: np.ndarray
    inner: float
    far_mass: float

    @property
    def far_cutoff(self) -> float:
        return self.far_offset * self.h

    @property
    def diagonal(self) -> float:
        """Coefficient of u(x) in the discrete operator, tail mass included."""
        return -2.0 * (float(self.weights.sum()) + self.far_mass)


def build_stencil(spec: KernelSpec, grid: Grid, scheme: QuadratureScheme,
                  first_offset: Optional[int] = None, fold_inner: bool = True) -> Stencil:
    """Offset weights for cells [k0 h, K h] with g = du / z^2 interpolated linearly."""
    k0 = scheme.inner_offset(grid) if first_offset is None else int(first_offset)
    K = scheme.far_offset(grid)
    return _build_stencil_cached(spec, grid.h, k0, K, scheme, fold_inner)


@lru_cache(maxsize=128)
def _build_stencil_cached(spec: KernelSpec, h: float, k0: int, K: int,
                          scheme: QuadratureScheme, fold_inner: bool) -> Stencil:
    C = kernel_constant(spec, scheme)
    e = 2.0 - spec.sigma
    left = np.arange(k0, K, dtype=float)
    right = left + 1.0
    # scaled moments over each cell in units of h: z = h s
    n0 = _power_integral(left, right, e)
    n1 = _power_integral(left, right, e + 1.0)
    kappa_mid = np.asarray(spec.kappa((left + 0.5) * h), dtype=float) * np.ones_like(left)
    scale = C * h ** e
    to_left = scale * kappa_mid * (right * n0 - n1)
    to_right = scale * kappa_mid * (n1 - left * n0)

    weights = np.zeros(K + 1)
    idx = np.arange(k0, K)
    np.add.at(weights, idx, to_left)
    np.add.at(weights, idx + 1, to_right)
    offsets = np.arange(K + 1, dtype=float) * h
    weights[1:] /= offsets[1:] ** 2

    inner = inner_moment(spec, k0 * h, scheme)
    if fold_inner:
        weights[1] += inner / h ** 2
    far_mass = tail_mass(spec, K * h, scheme)
    weights.setflags(write=False)
    logger.debug(f"Built stencil sigma={spec.sigma} h={h} offsets {k0}..{K}")
    return Stencil(spec, h, k0, K, weights, inner, far_mass)


def second_differences(u: GridFunction, x: float, K: int) -> np.ndarray:
    """du_k = u(x + k h) + u(x - k h) - 2 u(x) for k = 0..K, exterior values past R."""
    i = u.grid.index_of(x)
    extended = u.extended_values(K)
    c = i + K
    plus = extended[c:c + K + 1]
    minus = extended[c - K:c + 1][::-1]
    return plus + minus - 2.0 * extended[c]


def exterior_pair_integral(u: GridFunction, x: float, spec: KernelSpec, cutoff: float,
                           scheme: QuadratureScheme) -> float:
    """int_cutoff^inf [E(x + z) + E(x - z)] K(z) dz for the exterior formula E."""
    ext = u.exterior
    if ext.tag == "zero":
        return 0.0
    C = kernel_constant(spec, scheme)
    sigma = spec.sigma
    if ext.tag == "cosine":
        # E(x+z) + E(x-z) = 2 A cos(omega x + phi) cos(omega z)
        factor = 2.0 * ext.amplitude * math.cos(ext.omega * x + ext.phi)
        if factor == 0.0:
            return 0.0
        weighted = _quad(lambda z: float(spec.kappa(z)) * z ** (-1.0 - sigma), cutoff, np.inf,
                         scheme, weight="cos", wvar=abs(ext.omega))
        return C * factor * weighted
    return C * _quad(lambda z: (ext(x + z) + ext(x - z)) * float(spec.kappa(z)) * z ** (-1.0 - sigma),
                     cutoff, np.inf, scheme)


def tail_contribution(u: GridFunction, x: float, stencil: Stencil, scheme: QuadratureScheme) -> float:
    """int_Z^inf du(z) K(z) dz beyond the far cutoff Z."""
    u_x = u.at_node(x)
    pair = exterior_pair_integral(u, x, stencil.spec, stencil.far_cutoff, scheme)
    return pair - 2.0 * u_x * stencil.far_mass


def signed_tail_contribution(u: GridFunction, x: float, sigma: float, cutoff: float,
                             pos_weight: float, neg_weight: float, scheme: QuadratureScheme) -> float:
    """int_Z^inf [pos (du)_+ - neg (du)_-] C |z|^(-1-sigma) dz for the Pucci envelopes."""
    C = normalization_constant(sigma) * scheme.normalization_scale
    ext = u.exterior
    u_x = u.at_node(x)

    def integrand(z):
        du = ext(x + z) + ext(x - z) - 2.0 * u_x
        return (pos_weight * max(du, 0.0) - neg_weight * max(-du, 0.0)) * z ** (-1.0 - sigma)

    return C * _quad(integrand, cutoff, np.inf, scheme)

