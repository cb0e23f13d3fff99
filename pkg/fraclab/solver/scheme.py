"""Explicit monotone pseudo-time marching and vanishing-viscosity continuation.

The residual of -eps L u - |s Du + p|^gamma I(u) = f is

    r = eps L u + |s D_h u + p|^gamma I(u) + f

and u solves the discrete problem iff r vanishes on the unknown nodes.
|s D_h u + p| is the drift of operators.drift_field, which stays positive
at strict discrete extrema.
Marching u <- u + dt r is the explicit scheme for u_t = r.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DomainError, UsageError
from ..grid import Grid, GridFunction
from ..kernels import make_frac_laplacian
from ..operators import (DEFAULT_SCHEME, AffineOperator, QuadratureScheme, apply_isaacs,
                         assemble_isaacs, assemble_linear, drift_field)
from .problem import ProblemSpec, SolveConfig, SolveReport, StageReport

logger = logging.getLogger(__name__)

INCREMENT_RADIUS = 0.5


@dataclass(eq=False)
class DiscreteProblem:
    """A ProblemSpec frozen on one grid with its boundary values."""
    prob: ProblemSpec
    data: GridFunction
    index: np.ndarray
    viscosity: AffineOperator
    blocks: List[List[AffineOperator]]
    rhs: np.ndarray

    @property
    def grid(self) -> Grid:
        return self.data.grid

    @property
    def viscosity_moment(self) -> float:
        """h^sigma times the total stencil mass of the fractional Laplacian."""
        return self.grid.h ** self.prob.sigma * abs(self.viscosity.diagonal)

    @property
    def operator_moment(self) -> float:
        """h^sigma times the largest stencil mass in the family; at most Lambda * viscosity_moment."""
        largest = max(abs(block.diagonal) for row in self.blocks for block in row)
        return self.grid.h ** self.prob.sigma * largest

    def drift(self, values: np.ndarray) -> np.ndarray:
        """|s D_h u + p| on the unknowns; nonzero at strict discrete extrema."""
        lo, hi = self.index[0], self.index[-1]
        return drift_field(values[lo - 1:hi + 2], self.grid.h, self.prob.gradient_scale, self.prob.shift_p)

    def degenerate_factor(self, values: np.ndarray) -> np.ndarray:
        # 0^0 = 1
        return np.power(self.drift(values), self.prob.gamma)

    def transport_moment(self, drift: np.ndarray, isaacs: np.ndarray) -> float:
        """h^sigma times the largest row sum of d(drift^gamma)/du times |I(u)|.

        drift^gamma is not Lipschitz at 0 for gamma < 1, so slopes are clipped below at h there.
        """
        gamma = self.prob.gamma
        if gamma == 0:
            return 0.0
        h = self.grid.h
        slopes = np.maximum(drift, h) if gamma < 1 else drift
        rates = gamma * np.power(slopes, gamma - 1.0) * np.abs(isaacs) * (2.0 * self.prob.gradient_scale / h)
        return h ** self.prob.sigma * float(np.max(rates))

    def residual_and_dt(self, values: np.ndarray, epsilon: float,
                        cfl_factor: float) -> Tuple[np.ndarray, float]:
        """Residual on the unknowns and the stable step at ``values``, sharing one Isaacs evaluation."""
        unknowns = values[self.index]
        drift = self.drift(values)
        isaacs = apply_isaacs(self.blocks, unknowns)
        factor = np.power(drift, self.prob.gamma)

        result = factor * isaacs + self.rhs
        if epsilon > 0:
            result = result + epsilon * self.viscosity(unknowns)

        denominator = (epsilon * self.viscosity_moment + float(np.max(factor)) * self.operator_moment
                       + self.transport_moment(drift, isaacs) + 1.0)
        return result, cfl_factor * self.grid.h ** self.prob.sigma / denominator

    def residual_values(self, values: np.ndarray, epsilon: float) -> np.ndarray:
        return self.residual_and_dt(values, epsilon, 1.0)[0]

    def stable_dt(self, values: np.ndarray, epsilon: float, cfl_factor: float) -> float:
        return self.residual_and_dt(values, epsilon, cfl_factor)[1]


def discretize(prob: ProblemSpec, u: GridFunction, q: QuadratureScheme = DEFAULT_SCHEME) -> DiscreteProblem:
    """Assemble the operators of ``prob`` with the non-unknown values of ``u`` frozen."""
    mask = prob.interior_mask(u.grid)
    index = np.flatnonzero(mask)
    if index[0] == 0 or index[-1] == u.grid.size - 1:
        raise UsageError("Unknown nodes must not touch the grid boundary")
    viscosity = assemble_linear(make_frac_laplacian(prob.sigma), u, mask, q)
    blocks = assemble_isaacs(prob.operator, u, mask, q)
    rhs = prob.rhs_values(u.grid)[index]
    logger.debug(f"Discretized problem on {index.size} unknowns (h={u.grid.h}, sigma={prob.sigma})")
    return DiscreteProblem(prob, u, index, viscosity, blocks, rhs)


def _check_epsilon(epsilon: float) -> None:
    if epsilon < 0:
        raise DomainError(f"epsilon must be nonnegative, got {epsilon}")


def residual(u: GridFunction, prob: ProblemSpec, epsilon: float,
             q: QuadratureScheme = DEFAULT_SCHEME,
             discrete: Optional[DiscreteProblem] = None) -> GridFunction:
    """Residual on the unknown nodes of B_radius; zero on every other node."""
    _check_epsilon(epsilon)
    discrete = discrete or discretize(prob, u, q)
    values = np.zeros(u.grid.size)
    values[discrete.index] = discrete.residual_values(u.values, epsilon)
    return GridFunction(u.grid, values)


def stable_dt(u: GridFunction, prob: ProblemSpec, epsilon: float, cfl_factor: float = 0.5,
              q: QuadratureScheme = DEFAULT_SCHEME,
              discrete: Optional[DiscreteProblem] = None) -> float:
    """cfl h^sigma / (eps C_mom + G^gamma C_op + T + 1), recomputed from the current iterate.

    T bounds the rate at which the degenerate factor moves with u; it is 0 for gamma = 0.
    """
    _check_epsilon(epsilon)
    discrete = discrete or discretize(prob, u, q)
    return discrete.stable_dt(u.values, epsilon, cfl_factor)


def pseudo_time_step(u: GridFunction, prob: ProblemSpec, epsilon: float, dt: float,
                     q: QuadratureScheme = DEFAULT_SCHEME,
                     discrete: Optional[DiscreteProblem] = None) -> GridFunction:
    """u + dt * residual(u) on the unknown nodes; all other nodes are left untouched."""
    _check_epsilon(epsilon)
    discrete = discrete or discretize(prob, u, q)
    r, bound = discrete.residual_and_dt(u.values, epsilon, 1.0)
    if dt <= 0 or dt > bound * (1.0 + 1e-12):
        raise UsageError(f"dt={dt:.6g} outside the stability bound (0, {bound:.6g}]")
    values = np.array(u.values)
    values[discrete.index] += dt * r
    return u.with_values(values)


def solve_viscous(prob: ProblemSpec, epsilon: float, config: SolveConfig,
                  initial: Optional[GridFunction] = None,
                  discrete: Optional[DiscreteProblem] = None) -> Tuple[GridFunction, StageReport]:
    """March to a residual below tol_residual or stop after max_iters."""
    if epsilon <= 0:
        raise DomainError(f"solve_viscous needs epsilon > 0, got {epsilon}")
    u = initial if initial is not None else prob.initial_guess(config.grid)
    discrete = discrete or discretize(prob, u, config.scheme)
    values = np.array(u.values)
    index = discrete.index

    logger.info(f"Stage epsilon={epsilon:.6g}: starting ({index.size} unknowns)")
    iterations = 0
    r, dt = discrete.residual_and_dt(values, epsilon, config.cfl_factor)
    res = float(np.max(np.abs(r)))
    while res > config.tol_residual and iterations < config.max_iters:
        values[index] += dt * r
        iterations += 1
        r, dt = discrete.residual_and_dt(values, epsilon, config.cfl_factor)
        res = float(np.max(np.abs(r)))
        if iterations % config.log_every == 0:
            logger.debug(f"epsilon={epsilon:.6g} iteration {iterations}: residual {res:.3e}")

    converged = res <= config.tol_residual
    if converged:
        logger.info(f"Stage epsilon={epsilon:.6g}: converged in {iterations} iterations (residual {res:.3e})")
    else:
        logger.warning(f"Stage epsilon={epsilon:.6g}: no convergence after {iterations} iterations "
                       f"(residual {res:.3e})")
    return u.with_values(values), StageReport(epsilon, iterations, res, converged)


def solve_vanishing_viscosity(prob: ProblemSpec, config: SolveConfig,
                              initial: Optional[GridFunction] = None) -> SolveReport:
    """Warm-started sweep over the epsilon schedule.

    Increments are sup-norm distances between consecutive stage solutions
    on B_{1/2}.
    """
    u = initial if initial is not None else prob.initial_guess(config.grid)
    discrete = discretize(prob, u, config.scheme)
    half_ball = config.grid.ball_mask(0.0, INCREMENT_RADIUS)

    stages: List[StageReport] = []
    increments: List[float] = []
    previous: Optional[GridFunction] = None
    for epsilon in config.epsilon_schedule:
        u, stage = solve_viscous(prob, epsilon, config, initial=u, discrete=discrete)
        stages.append(stage)
        if previous is not None:
            increments.append(float(np.max(np.abs(u.values[half_ball] - previous.values[half_ball]))))
        previous = u

    report = SolveReport(u, stages, increments)
    if not report.converged:
        logger.warning(f"Stages {report.failed_stages} did not converge")
    return report


def rescale_large_shift(prob: ProblemSpec) -> ProblemSpec:
    """Equivalent problem with unit shift for |p| >= 1.

    -|Du + p|^gamma I(u) = f becomes -|p/|p| + Du/|p||^gamma I(u) = |p|^-gamma f,
    so residuals at eps = 0 satisfy r_original = |p|^gamma r_rescaled.
    """
    p = abs(prob.shift_p)
    if p < 1.0:
        raise DomainError(f"rescale_large_shift needs |p| >= 1, got {prob.shift_p}")
    a0 = 1.0 / p
    factor = a0 ** prob.gamma
    rhs = prob.rhs
    if isinstance(rhs, GridFunction):
        scaled_rhs = rhs.map_affine(factor)
    elif callable(rhs):
        scaled_rhs = lambda y, base=rhs: factor * np.asarray(base(y), dtype=float)  # noqa: E731
    else:
        scaled_rhs = factor * float(rhs)
    return prob.replace(rhs=scaled_rhs, shift_p=prob.shift_p * a0,
                        gradient_scale=prob.gradient_scale * a0)
