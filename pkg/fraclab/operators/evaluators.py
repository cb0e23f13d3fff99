"""Pointwise evaluation of the nonlocal operators at grid nodes."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DomainError, UsageError
from ..grid import GridFunction
from ..kernels import IsaacsOperator, KernelSpec, make_frac_laplacian
from .quadrature import (QuadratureScheme, Stencil, build_stencil, second_differences,
                         signed_tail_contribution, tail_contribution)

logger = logging.getLogger(__name__)

DEFAULT_SCHEME = QuadratureScheme()

PUCCI_SIGNS = ("plus", "minus")


@dataclass(frozen=True)
class QuadraticTest:
    """phi(y) = value + slope (y - center) + curvature (y - center)^2 / 2."""
    center: float
    value: float
    slope: float
    curvature: float

    def __call__(self, y):
        t = np.asarray(y, dtype=float) - self.center
        result = self.value + self.slope * t + 0.5 * self.curvature * t ** 2
        return float(result) if np.ndim(y) == 0 else result

    def gradient(self, y: float) -> float:
        return self.slope + self.curvature * (y - self.center)


def _check_node(u: GridFunction, x: float) -> None:
    if abs(x) > u.grid.R - 1.0 + 1e-9 * u.grid.h:
        raise DomainError(f"x={x} is not an interior node: need |x| <= R - 1 = {u.grid.R - 1.0}")
    u.grid.index_of(x)


def _prepare(u: GridFunction, x: float, sigma: float) -> None:
    _check_node(u, x)
    u.exterior.check_l1_sigma(sigma)


def _apply(stencil: Stencil, du: np.ndarray, u: GridFunction, x: float, q: QuadratureScheme) -> float:
    return float(np.dot(stencil.weights, du)) + tail_contribution(u, x, stencil, q)


def eval_linear(u: GridFunction, spec: KernelSpec, x: float,
                q: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Symmetric-difference quadrature of the linear operator with kernel ``spec`` at node x."""
    _prepare(u, x, spec.sigma)
    stencil = build_stencil(spec, u.grid, q)
    du = second_differences(u, x, stencil.far_offset)
    return _apply(stencil, du, u, x, q)


def eval_isaacs(u: GridFunction, op: IsaacsOperator, x: float,
                q: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """min over rows of max over columns of the linear evaluations."""
    _prepare(u, x, op.sigma)
    du = None
    row_values = []
    for row in op.kernels:
        column_values = []
        for spec in row:
            stencil = build_stencil(spec, u.grid, q)
            if du is None:
                du = second_differences(u, x, stencil.far_offset)
            column_values.append(_apply(stencil, du, u, x, q))
        row_values.append(max(column_values))
    return min(row_values)


def eval_pucci(u: GridFunction, x: float, sign: str, sigma: float, lambda_lo: float,
               lambda_hi: float, q: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Extremal operator of the class with ellipticity band [lambda, Lambda].

    plus weighs positive second differences by Lambda and negative ones by
    lambda; minus swaps the two.
    """
    if sign not in PUCCI_SIGNS:
        raise UsageError(f"Pucci sign must be one of {PUCCI_SIGNS}, got '{sign}'")
    if not 0.0 < lambda_lo <= lambda_hi:
        raise DomainError("Ellipticity constants must satisfy 0 < lambda <= Lambda, "
                          f"got ({lambda_lo}, {lambda_hi})")
    _prepare(u, x, sigma)
    pos, neg = (lambda_hi, lambda_lo) if sign == "plus" else (lambda_lo, lambda_hi)

    stencil = build_stencil(make_frac_laplacian(sigma), u.grid, q)
    du = second_differences(u, x, stencil.far_offset)
    grid_part = float(np.dot(stencil.weights, pos * np.maximum(du, 0.0) - neg * np.maximum(-du, 0.0)))
    if u.exterior.tag == "zero":
        # du is -2 u(x) on the whole tail
        u_x = u.at_node(x)
        weight = neg if u_x > 0 else pos
        tail = -2.0 * u_x * weight * stencil.far_mass
    else:
        tail = signed_tail_contribution(u, x, sigma, stencil.far_cutoff, pos, neg, q)
    return grid_part + tail


def eval_I_delta(u: GridFunction, phi: QuadraticTest, op: IsaacsOperator, x: float,
                 delta: float, q: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Isaacs value with the test function on B_delta(x) and u outside it.

    For a quadratic test the inner symmetric difference is exactly
    curvature * z^2, so the inner part is curvature times the kernel moment.
    """
    if not 0.0 < delta <= 1.0:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    _prepare(u, x, op.sigma)
    k0 = int(round(delta / u.grid.h))
    if k0 < 1 or abs(k0 * u.grid.h - delta) > 1e-9 * u.grid.h:
        raise UsageError(f"delta={delta} must be a positive multiple of h={u.grid.h}")

    du = None
    row_values = []
    for row in op.kernels:
        column_values = []
        for spec in row:
            stencil = build_stencil(spec, u.grid, q, first_offset=k0, fold_inner=False)
            if du is None:
                du = second_differences(u, x, stencil.far_offset)
            outer = _apply(stencil, du, u, x, q)
            column_values.append(phi.curvature * stencil.inner + outer)
        row_values.append(max(column_values))
    return min(row_values)


def central_second_difference(u: GridFunction, x: float, step: Optional[float] = None) -> float:
    i = u.grid.index_of(x)
    k = 1 if step is None else int(round(step / u.grid.h))
    if k < 1 or i - k < 0 or i + k >= u.grid.size:
        raise DomainError(f"Second difference at x={x} with step {k * u.grid.h} leaves the grid")
    h = k * u.grid.h
    return float((u.values[i + k] + u.values[i - k] - 2.0 * u.values[i]) / h ** 2)


def central_gradient(u: GridFunction, x: float) -> float:
    i = u.grid.index_of(x)
    if i == 0 or i == u.grid.size - 1:
        raise DomainError(f"Central difference at the grid boundary x={x}")
    return float((u.values[i + 1] - u.values[i - 1]) / (2.0 * u.grid.h))


def drift_field(values: np.ndarray, h: float, scale: float = 1.0, shift: float = 0.0) -> np.ndarray:
    """|scale D_h u + shift| at values[1:-1].

    D_h is the central difference of v = scale u + shift x, floored by the
    smaller one-sided slope of v. The floor only binds at discrete extrema
    of v, where the one-sided slopes change sign; elsewhere it is the
    central value.
    """
    slopes = scale * np.diff(np.asarray(values, dtype=float)) / h + shift
    behind, ahead = slopes[:-1], slopes[1:]
    central = np.abs(0.5 * (behind + ahead))
    return np.maximum(central, np.minimum(np.abs(behind), np.abs(ahead)))


def monotone_drift(u: GridFunction, x: float, scale: float = 1.0, shift: float = 0.0) -> float:
    """drift_field at the node x."""
    i = u.grid.index_of(x)
    if i == 0 or i == u.grid.size - 1:
        raise DomainError(f"One-sided differences at the grid boundary x={x}")
    return float(drift_field(u.values[i - 1:i + 2], u.grid.h, scale, shift)[0])


def eval_local_limit(u: GridFunction, multipliers: Sequence[Sequence[float]], x: float,
                     step: Optional[float] = None, lambda_lo: Optional[float] = None,
                     lambda_hi: Optional[float] = None) -> float:
    """inf_i sup_j k_ij D^2_h u(x), evaluated literally."""
    _check_node(u, x)
    k = np.asarray(multipliers, dtype=float)
    if k.ndim != 2 or k.size == 0:
        raise UsageError("Local limit needs an m x n matrix of multipliers")
    if lambda_lo is not None and lambda_hi is not None:
        if np.any(k <= lambda_lo) or np.any(k >= lambda_hi):
            raise DomainError(f"Limit multipliers must lie in ({lambda_lo}, {lambda_hi})")
    second = central_second_difference(u, x, step)
    return float(np.min(np.max(k * second, axis=1)))


def eval_frac_p_laplacian(u: GridFunction, p_exp: float, r_p: float, x: float, sigma: float,
                          q: QuadratureScheme = DEFAULT_SCHEME) -> float:
    """Fractional p-Laplacian with jump j_p(g) = |g|^((p-2)/2) (1 + r_p).

    In one dimension rescaling the jump by j > 0 dilates the integration
    variable, so the compensated integral equals j^sigma times the
    fractional Laplacian at x.
    """
    if p_exp <= 2.0:
        raise DomainError(f"p_exp must exceed 2, got {p_exp}")
    if r_p < 0:
        raise DomainError(f"r_p must be nonnegative, got {r_p}")
    _prepare(u, x, sigma)
    gradient = central_gradient(u, x)
    jump = abs(gradient) ** ((p_exp - 2.0) / 2.0) * (1.0 + r_p)
    if jump == 0.0:
        return 0.0
    return jump ** sigma * eval_linear(u, make_frac_laplacian(sigma), x, q)


def sweep(evaluator: Callable[[GridFunction, float], float], u: GridFunction,
          nodes: Sequence[float], threads: int = 1) -> np.ndarray:
    """Evaluate a pointwise operator at many nodes; results are ordered like ``nodes``."""
    nodes = [float(x) for x in nodes]
    out = np.empty(len(nodes))
    if threads <= 1 or len(nodes) < 2:
        for i, x in enumerate(nodes):
            out[i] = evaluator(u, x)
        return out

    logger.debug(f"Sweeping {len(nodes)} nodes on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i, value in enumerate(pool.map(lambda x: evaluator(u, x), nodes)):
            out[i] = value
    return out


__all__ = [
    "DEFAULT_SCHEME",
    "QuadraticTest",
    "central_gradient",
    "central_second_difference",
    "drift_field",
    "eval_I_delta",
    "eval_frac_p_laplacian",
    "eval_isaacs",
    "eval_linear",
    "eval_local_limit",
    "eval_pucci",
    "monotone_drift",
    "sweep",
]
