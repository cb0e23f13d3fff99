"""Reference functions and problems with known operator values.

- cosine: the fractional Laplacian maps cos to -cos
- Gaussian: closed-form value of the fractional Laplacian at 0
- odd kink: annihilated at 0, unbounded at +-1 for sigma in (1, 2), with a closed form
- explicit solution |x|^(1+beta), beta = (sigma - 1) / (1 + gamma)
- comparison pair v = phi(|x|), u = v + eta with u(0) > v(0)
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy import special

from .errors import DomainError
from .grid import ExteriorExtension, Grid, GridFunction
from .kernels import IsaacsOperator, make_frac_laplacian, normalization_constant
from .operators import DEFAULT_SCHEME, QuadratureScheme, eval_isaacs, monotone_drift
from .solver import ProblemSpec

EXPLICIT_PROBE_POINT = 0.5


def cosine_function(grid: Grid, amplitude: float = 1.0, omega: float = 1.0, phi: float = 0.0) -> GridFunction:
    exterior = ExteriorExtension.cosine(amplitude, omega, phi)
    return GridFunction(grid, exterior.evaluate(grid.nodes), exterior)


def gaussian(grid: Grid) -> GridFunction:
    """q(x) = exp(-x^2), q''(0) = -2."""
    exterior = ExteriorExtension.from_callable(lambda y: np.exp(-np.asarray(y, dtype=float) ** 2), growth=0.0)
    return GridFunction(grid, np.exp(-grid.nodes ** 2), exterior)


def gaussian_fraclap_at_zero(sigma: float) -> float:
    """Exact fractional Laplacian of exp(-x^2) at 0: -2^sigma Gamma((1+sigma)/2) / sqrt(pi)."""
    return -(2.0 ** sigma) * float(special.gamma((1.0 + sigma) / 2.0)) / math.sqrt(math.pi)


GAUSSIAN_SECOND_DERIVATIVE_AT_ZERO = -2.0


def odd_kink(grid: Grid) -> GridFunction:
    """x + 1 for x <= -1, 0 on (-1, 1), x - 1 for x >= 1."""
    x = grid.nodes
    values = np.where(x >= 1.0, x - 1.0, np.where(x <= -1.0, x + 1.0, 0.0))
    return GridFunction(grid, values, ExteriorExtension.affine(-1.0, 1.0, 1.0, 1.0))


def odd_kink_reference(sigma: float, dist):
    """Exact fractional Laplacian of the odd kink at 1 - dist (the left side is its negative).

    C / (sigma (sigma - 1)) * (dist^(1-sigma) - (2 - dist)^(1-sigma)) for sigma in (1, 2).
    """
    if not 1.0 < sigma < 2.0:
        raise DomainError(f"Odd kink reference needs sigma in (1, 2), got {sigma}")
    d = np.asarray(dist, dtype=float)
    factor = normalization_constant(sigma) / (sigma * (sigma - 1.0))
    return factor * (d ** (1.0 - sigma) - (2.0 - d) ** (1.0 - sigma))


def odd_kink_reference_slope(sigma: float, dists) -> float:
    """Log-log slope of the exact odd kink values over ``dists``.

    Tends to -(sigma - 1) as the distances shrink; the regular part
    (2 - dist)^(1-sigma) steepens it at moderate distances.
    """
    d = np.asarray(dists, dtype=float)
    slope, _ = np.polyfit(np.log(d), np.log(odd_kink_reference(sigma, d)), 1)
    return float(slope)


def explicit_exponent(sigma: float, gamma: float) -> float:
    return 1.0 + (sigma - 1.0) / (1.0 + gamma)


def explicit_solution(grid: Grid, sigma: float, gamma: float) -> GridFunction:
    """|x|^(1+beta) on the grid with the same power law outside."""
    exponent = explicit_exponent(sigma, gamma)
    exterior = ExteriorExtension.power(1.0, exponent)
    return GridFunction(grid, np.abs(grid.nodes) ** exponent, exterior)


def explicit_constant(u: GridFunction, op: IsaacsOperator, gamma: float,
                      q: QuadratureScheme = DEFAULT_SCHEME, x: float = EXPLICIT_PROBE_POINT) -> float:
    """C* = drift(u, x)^gamma I(u, x); with f = -C* the residual vanishes at x."""
    x = u.grid.snap(x)
    return monotone_drift(u, x) ** gamma * eval_isaacs(u, op, x, q)


def explicit_problem(grid: Grid, sigma: float, gamma: float, op: Optional[IsaacsOperator] = None,
                     q: QuadratureScheme = DEFAULT_SCHEME) -> Tuple[ProblemSpec, GridFunction, float]:
    """Problem with f = -C* whose exact solution is |x|^(1+beta); returns (problem, u, C*)."""
    if not 1.0 < sigma < 2.0:
        raise DomainError(f"Explicit solution needs sigma in (1, 2), got {sigma}")
    if gamma <= 0:
        raise DomainError(f"Explicit solution needs gamma > 0 for a finite tail, got {gamma}")
    op = op or IsaacsOperator.single(make_frac_laplacian(sigma))
    u = explicit_solution(grid, sigma, gamma)
    c_star = explicit_constant(u, op, gamma, q)
    prob = ProblemSpec(gamma=gamma, operator=op, rhs=-c_star, exterior=u.exterior)
    return prob, u, c_star


def smooth_step(t):
    """C-infinity nondecreasing profile: 0 on [0, 1], 1 on [2, inf)."""
    t = np.asarray(t, dtype=float)

    def psi(s):
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)

    left = psi(t - 1.0)
    right = psi(2.0 - t)
    return left / (left + right)


def bump(x, amplitude: float, support: float):
    """amplitude * exp(1 - 1 / (1 - (x/support)^2)) inside the support, 0 outside."""
    x = np.asarray(x, dtype=float)
    s = (x / support) ** 2
    inside = s < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        values = np.where(inside, amplitude * np.exp(1.0 - 1.0 / np.where(inside, 1.0 - s, 1.0)), 0.0)
    return values


def comparison_pair(grid: Grid, amplitude: float = 1e-3,
                    support: float = 0.5) -> Tuple[GridFunction, GridFunction]:
    """v = phi(|x|) and u = v + eta with eta supported in B_support, eta(0) = amplitude."""
    if not 0.0 < support < 1.0:
        raise DomainError(f"Bump support must lie in (0, 1), got {support}")
    exterior = ExteriorExtension.constant(1.0)
    v_values = smooth_step(np.abs(grid.nodes))
    v = GridFunction(grid, v_values, exterior)
    u = GridFunction(grid, v_values + bump(grid.nodes, amplitude, support), exterior)
    return v, u


def comparison_problem(sigma: float, gamma: float = 1.0) -> ProblemSpec:
    """f = 0 with Dirichlet data phi(|x|); v and u of comparison_pair share this data."""
    op = IsaacsOperator.single(make_frac_laplacian(sigma))
    return ProblemSpec(gamma=gamma, operator=op, rhs=0.0, exterior=ExteriorExtension.constant(1.0),
                       boundary=lambda y: smooth_step(np.abs(y)))
