"""Regularity probes: Holder exponent fits, flatness traces and blow-up profiles."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError, UsageError
from ..grid import GridFunction, best_affine_fit, holder_seminorm, oscillation
from ..kernels import KernelSpec
from ..operators import DEFAULT_SCHEME, QuadratureScheme, eval_linear

logger = logging.getLogger(__name__)

MIN_NODES_PER_RADIUS = 4
MIN_FLATNESS_NODES = 4
SIDES = ("left", "right")


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Least-squares slope of y against x and the RMS residual of the fit."""
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


@dataclass(frozen=True)
class RegularityReport:
    fitted_exponent: float
    seminorm_at_fit: float
    scale_table: List[Tuple[float, float]]
    regression_residual: float

    def summary_lines(self) -> List[str]:
        return [
            f"fitted_exponent = {self.fitted_exponent:.17g}",
            f"seminorm_at_fit = {self.seminorm_at_fit:.17g}",
            f"regression_residual = {self.regression_residual:.17g}",
            f"scales = {len(self.scale_table)}",
        ]


def fit_holder_exponent(u: GridFunction, center: float, scales: Sequence[float]) -> RegularityReport:
    """Slope of log oscillation(B_r(center)) against log r.

    The seminorm is reported at the fitted exponent (clipped to (0, 1]) on
    the largest ball.
    """
    radii = np.asarray(scales, dtype=float)
    if radii.size < 3:
        raise UsageError(f"Holder fit needs at least 3 scales, got {radii.size}")
    if np.any(np.diff(radii) >= 0):
        raise UsageError("Scales must be strictly decreasing")
    smallest = MIN_NODES_PER_RADIUS * u.grid.h
    if radii[-1] < smallest - 1e-12:
        raise UsageError(f"Smallest scale {radii[-1]} is under-resolved: need r >= {smallest}")

    oscillations = np.array([oscillation(u, center, r) for r in radii])
    if np.any(oscillations <= 0):
        raise UsageError("u is constant on some probe ball; no exponent to fit")
    exponent, residual = _loglog_fit(np.log(radii), np.log(oscillations))
    alpha = min(max(exponent, 1e-6), 1.0)
    seminorm = holder_seminorm(u, alpha, center, float(radii[0]))
    logger.info(f"Fitted Holder exponent {exponent:.4f} at {center} (residual {residual:.2e})")
    table = [(float(r), float(o)) for r, o in zip(radii, oscillations)]
    return RegularityReport(exponent, seminorm, table, residual)


@dataclass(frozen=True)
class FlatnessEntry:
    k: int
    radius: float
    a: float
    p: float
    dev: float
    rescaled_dev: float
    growth_ok: bool


@dataclass(frozen=True)
class FlatnessTrace:
    """Affine approximations l_k = a_k + p_k (x - center) on B_{rho^k}(center)."""
    rho: float
    alpha: float
    entries: List[FlatnessEntry] = field(default_factory=list)
    slope: Optional[float] = None
    regression_residual: Optional[float] = None
    deviation_ok: bool = True
    coefficients_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.deviation_ok and self.coefficients_ok

    def as_rows(self) -> List[dict]:
        return [entry.__dict__.copy() for entry in self.entries]


def _max_feasible_depth(u: GridFunction, center: float, rho: float) -> int:
    k = 0
    while np.count_nonzero(u.grid.ball_mask(center, rho ** (k + 1))) >= MIN_FLATNESS_NODES:
        k += 1
    return k


def _growth_ok(u: GridFunction, center: float, radius: float, a: float, p: float,
               scale: float, alpha_bar: float) -> bool:
    """|w_k(x)| <= 1 + |x|^(1 + alpha_bar) on the unit ball around center, in rescaled variables."""
    mask = u.grid.ball_mask(center, 1.0)
    t = u.nodes[mask] - center
    w = (u.values[mask] - a - p * t) / scale
    x = t / radius
    return bool(np.all(np.abs(w) <= 1.0 + np.abs(x) ** (1.0 + alpha_bar) + 1e-12))


def flatness_trace(u: GridFunction, center: float, rho: float, depth: int, C_bound: float,
                   alpha: float, alpha_bar: float = 1.0) -> FlatnessTrace:
    """Best affine fits on the balls B_{rho^k}(center), k = 0..depth.

    Passes iff dev_k <= rho^(k(1+alpha)) dev_0 for every k and the increments
    satisfy |a_{k+1} - a_k| <= C rho^((1+alpha)k), |p_{k+1} - p_k| <= C rho^(alpha k).
    """
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if C_bound < 0:
        raise DomainError("C_bound must be nonnegative")
    if depth < 0:
        raise UsageError("depth must be nonnegative")
    feasible = _max_feasible_depth(u, center, rho)
    if depth > feasible:
        raise UsageError(f"Depth {depth} under-resolved at h={u.grid.h}; max feasible depth is {feasible}")

    entries: List[FlatnessEntry] = []
    for k in range(depth + 1):
        radius = rho ** k
        fit = best_affine_fit(u, center, radius)
        scale = rho ** (k * (1.0 + alpha))
        growth = _growth_ok(u, center, radius, fit.a, fit.p, scale, alpha_bar)
        entries.append(FlatnessEntry(k, radius, fit.a, fit.p, fit.dev, fit.dev / scale, growth))

    dev0 = entries[0].dev
    slack = 1e-12 * max(1.0, dev0)
    deviation_ok = all(e.dev <= rho ** (e.k * (1.0 + alpha)) * dev0 + slack for e in entries)
    coefficients_ok = True
    for e, nxt in zip(entries[:-1], entries[1:]):
        if abs(nxt.a - e.a) > C_bound * rho ** ((1.0 + alpha) * e.k) + 1e-12:
            coefficients_ok = False
        if abs(nxt.p - e.p) > C_bound * rho ** (alpha * e.k) + 1e-12:
            coefficients_ok = False

    slope = residual = None
    devs = np.array([e.dev for e in entries])
    if len(entries) >= 2 and np.all(devs > 0):
        ks = np.array([e.k for e in entries], dtype=float)
        slope, residual = _loglog_fit(ks * math.log(rho), np.log(devs))
    return FlatnessTrace(rho, alpha, entries, slope, residual, deviation_ok, coefficients_ok)


@dataclass(frozen=True)
class BlowupProfile:
    side: str
    table: List[Tuple[float, float, float]]
    slope: float
    regression_residual: float


def blowup_profile(u: GridFunction, spec: KernelSpec, side: str, approach_points: Sequence[float],
                   q: QuadratureScheme = DEFAULT_SCHEME) -> BlowupProfile:
    """Operator values as x approaches +1 (right) or -1 (left).

    Points are snapped to the nearest grid node; the table rows are
    (distance to the boundary point, node, value).
    """
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, got '{side}'")
    points = [float(x) for x in approach_points]
    if len(points) < 2:
        raise UsageError("Blow-up profile needs at least two approach points")
    if any(abs(x) >= 1.0 for x in points):
        raise UsageError("Approach points must lie strictly inside (-1, 1)")
    wrong_side = [x for x in points if (x <= 0.0 if side == "right" else x >= 0.0)]
    if wrong_side:
        raise UsageError(f"Approach points {wrong_side} are not on the {side} side of 0")
    if not 1.0 < spec.sigma < 2.0:
        logger.warning(f"Blow-up profile at sigma={spec.sigma} outside (1, 2)")

    table = []
    for x in points:
        node = u.grid.snap(x)
        dist = 1.0 - node if side == "right" else node + 1.0
        if dist <= 0:
            raise UsageError(f"Approach point {x} snaps onto the boundary")
        table.append((dist, node, eval_linear(u, spec, node, q)))
    dists = np.array([row[0] for row in table])
    values = np.abs(np.array([row[2] for row in table]))
    if np.any(values == 0):
        raise UsageError("Operator vanishes at an approach point; no blow-up rate to fit")
    slope, residual = _loglog_fit(np.log(dists), np.log(values))
    return BlowupProfile(side, table, slope, residual)


def normalize_for_flatness(u: GridFunction, f_sup: float, sigma: float, gamma: float,
                           eta: float) -> GridFunction:
    """u / (|u|_inf + |f|_inf^((sigma-1)/(1+gamma)) / eta), so the result has sup norm <= 1."""
    if eta <= 0:
        raise DomainError(f"eta must be positive, got {eta}")
    if f_sup < 0:
        raise DomainError("f_sup must be nonnegative")
    if gamma < 0:
        raise DomainError(f"gamma must be nonnegative, got {gamma}")
    # the f term vanishes with f, whatever the sign of the exponent
    f_term = f_sup ** ((sigma - 1.0) / (1.0 + gamma)) / eta if f_sup > 0 else 0.0
    denominator = u.sup_norm() + f_term
    if denominator == 0:
        return u
    return u.map_affine(1.0 / denominator)
