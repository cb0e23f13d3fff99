"""Norms, oscillations, seminorms and affine fits of grid functions."""

import logging
import warnings
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import integrate

from ..errors import DomainError, UsageError
from .grid import GridFunction

logger = logging.getLogger(__name__)

_PAIR_BLOCK = 512


def _ball(u: GridFunction, center: float, r: float) -> Tuple[np.ndarray, np.ndarray]:
    mask = u.grid.ball_mask(center, r)
    return u.nodes[mask], u.values[mask]


def tail_norm(u: GridFunction, sigma: float) -> float:
    """int_R |u(y)| (1 + |y|)^(-1-sigma) dy.

    Trapezoid rule on [-R, R]; adaptive quadrature of the exterior formula on
    |y| > R.
    """
    if not 0.0 < sigma < 2.0:
        raise DomainError(f"sigma must lie in (0, 2), got {sigma}")
    u.exterior.check_l1_sigma(sigma)

    def weight(y):
        return (1.0 + np.abs(y)) ** (-(1.0 + sigma))

    inner = integrate.trapezoid(np.abs(u.values) * weight(u.nodes), u.nodes)
    if u.exterior.tag == "zero":
        return float(inner)

    R = u.grid.R
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        right, err_r = integrate.quad(lambda y: abs(u.exterior(y)) * weight(y), R, np.inf,
                                      epsabs=1e-12, epsrel=1e-10, limit=200)
        left, err_l = integrate.quad(lambda y: abs(u.exterior(-y)) * weight(y), R, np.inf,
                                     epsabs=1e-12, epsrel=1e-10, limit=200)
    if max(err_r, err_l) > 1e-8:
        logger.warning(f"Tail norm quadrature error estimate {max(err_r, err_l):.2e}")
    return float(inner + right + left)


def oscillation(u: GridFunction, center: float, r: float) -> float:
    """max - min of u over the nodes of the closed ball B_r(center)."""
    _, values = _ball(u, center, r)
    if values.size == 0:
        raise UsageError(f"No grid nodes in the ball B_{r}({center})")
    return float(values.max() - values.min())


def _pairwise_holder(x: np.ndarray, v: np.ndarray, alpha: float) -> float:
    best = 0.0
    for start in range(0, x.size, _PAIR_BLOCK):
        xs = x[start:start + _PAIR_BLOCK, None]
        vs = v[start:start + _PAIR_BLOCK, None]
        dist = np.abs(xs - x[None, :])
        diff = np.abs(vs - v[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, diff / dist ** alpha, 0.0)
        best = max(best, float(ratio.max()))
    return best


def holder_seminorm(u: GridFunction, alpha: float, center: float, r: float) -> float:
    """max over node pairs x != y in the ball of |u(x) - u(y)| / |x - y|^alpha."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    x, v = _ball(u, center, r)
    if x.size < 2:
        raise UsageError(f"Holder seminorm needs two nodes in B_{r}({center})")
    return _pairwise_holder(x, v, alpha)


def c1alpha_seminorm(u: GridFunction, alpha: float, center: float, r: float) -> float:
    """Holder seminorm of the centered difference quotient D_h u over the ball."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    mask = u.grid.ball_mask(center, r)
    mask[[0, -1]] = False
    idx = np.flatnonzero(mask)
    if idx.size < 2:
        raise UsageError(f"C^(1,alpha) seminorm needs two interior nodes in B_{r}({center})")
    derivative = (u.values[idx + 1] - u.values[idx - 1]) / (2.0 * u.grid.h)
    return _pairwise_holder(u.nodes[idx], derivative, alpha)


@dataclass(frozen=True)
class AffineFit:
    """Sup-norm best affine approximation a + p (x - center) on a ball."""
    a: float
    p: float
    dev: float

    def __iter__(self):
        return iter((self.a, self.p, self.dev))


def _cross(o: Tuple[float, float], a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_slopes(t: np.ndarray, v: np.ndarray) -> List[float]:
    """Edge slopes of the upper and lower convex hulls of sorted points."""
    points = list(zip(t.tolist(), v.tolist()))
    lower: List[Tuple[float, float]] = []
    upper: List[Tuple[float, float]] = []
    for point in points:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], point) <= 0:
            lower.pop()
        lower.append(point)
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], point) >= 0:
            upper.pop()
        upper.append(point)
    slopes = []
    for hull in (lower, upper):
        for (x0, y0), (x1, y1) in zip(hull[:-1], hull[1:]):
            slopes.append((y1 - y0) / (x1 - x0))
    return slopes


def best_affine_fit(u: GridFunction, center: float, r: float) -> AffineFit:
    """Chebyshev (sup-norm) affine fit of u over the nodes of B_r(center).

    The deviation max - min of u - p t is convex and piecewise linear in p
    with breakpoints at hull edge slopes, so the optimum is among them.
    Ties go to the lexicographically smallest (a, p).
    """
    x, v = _ball(u, center, r)
    if x.size < 3:
        raise UsageError(f"Affine fit needs at least 3 nodes in B_{r}({center})")
    t = x - center
    candidates = np.unique(np.asarray(_hull_slopes(t, v)))
    residual = v[None, :] - candidates[:, None] * t[None, :]
    upper = residual.max(axis=1)
    lower = residual.min(axis=1)
    devs = 0.5 * (upper - lower)
    offsets = 0.5 * (upper + lower)
    best = devs.min()
    tol = 1e-14 * max(1.0, float(np.abs(v).max()))
    tied = np.flatnonzero(devs <= best + tol)
    order = sorted(tied, key=lambda i: (offsets[i], candidates[i]))
    i = order[0]
    return AffineFit(float(offsets[i]), float(candidates[i]), float(max(devs[i], 0.0)))
