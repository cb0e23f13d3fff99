"""Built-in fixture suite run by the ``validate`` command."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from .. import fixtures
from ..grid import Grid
from ..kernels import make_frac_laplacian
from ..operators import QuadratureScheme, eval_linear
from ..probe import blowup_profile
from ..solver import certify_viscosity, residual

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
UNDER_RESOLVED = "UNDER-RESOLVED"

DEFAULT_R = 4.0
DEFAULT_H = 1.0 / 512.0

COSINE_SIGMAS = (0.5, 1.0, 1.5)
COSINE_TOL = 1e-3
NEAR_TWO_SIGMAS = (1.8, 1.9, 1.95, 1.99)
EXPLICIT_SIGMA = 1.8
EXPLICIT_GAMMA = 1.0
EXPLICIT_REL_TOL = 0.05
KINK_SIGMA = 1.5
KINK_DISTS = (0.2, 0.1, 0.05, 0.025)
KINK_ZERO_TOL = 1e-10
KINK_SLOPE_TOL = 0.1
COMPARISON_SIGMA = 1.5
COMPARISON_DELTA = 0.25


@dataclass(frozen=True)
class FixtureResult:
    name: str
    status: str
    measured: float
    target: str

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def line(self) -> str:
        return f"{self.name}: {self.status} (measured={self.measured:.6g}, target={self.target})"


def _grade(name: str, measured: float, bound: float, relaxed: float, target: str) -> FixtureResult:
    if measured <= bound:
        return FixtureResult(name, PASS, measured, target)
    if measured <= relaxed:
        return FixtureResult(name, UNDER_RESOLVED, measured, target)
    return FixtureResult(name, FAIL, measured, target)


def _ordered_map(func: Callable, items: Sequence, threads: int) -> List:
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def cosine_symbol(grid: Grid, q: QuadratureScheme, relax: float, threads: int) -> FixtureResult:
    u = fixtures.cosine_function(grid)
    values = _ordered_map(lambda s: eval_linear(u, make_frac_laplacian(s), 0.0, q), COSINE_SIGMAS, threads)
    error = max(abs(v + 1.0) for v in values)
    return _grade("cosine_symbol", error, COSINE_TOL, COSINE_TOL * relax, f"|I cos(0) + 1| <= {COSINE_TOL:g}")


def near_two_consistency(grid: Grid, q: QuadratureScheme, threads: int) -> FixtureResult:
    u = fixtures.gaussian(grid)
    values = _ordered_map(lambda s: eval_linear(u, make_frac_laplacian(s), 0.0, q), NEAR_TWO_SIGMAS, threads)
    errors = [abs(v - fixtures.GAUSSIAN_SECOND_DERIVATIVE_AT_ZERO) for v in values]
    increases = max(b - a for a, b in zip(errors[:-1], errors[1:]))
    status = PASS if increases < 0 else FAIL
    return FixtureResult("sigma_to_two", status, errors[-1], "errors decrease along sigma -> 2")


def explicit_solution(grid: Grid, q: QuadratureScheme, relax: float) -> FixtureResult:
    prob, u, c_star = fixtures.explicit_problem(grid, EXPLICIT_SIGMA, EXPLICIT_GAMMA, q=q)
    r = residual(u, prob, 0.0, q)
    band = (np.abs(grid.nodes) >= 0.1) & (np.abs(grid.nodes) <= 0.9)
    measured = float(np.max(np.abs(r.values[band]))) / abs(c_star)
    return _grade("explicit_solution", measured, EXPLICIT_REL_TOL, EXPLICIT_REL_TOL * relax,
                  f"sup|r| / |C*| <= {EXPLICIT_REL_TOL:g}")


def odd_kink(grid: Grid, q: QuadratureScheme, relax: float) -> List[FixtureResult]:
    u = fixtures.odd_kink(grid)
    spec = make_frac_laplacian(KINK_SIGMA)
    at_zero = abs(eval_linear(u, spec, 0.0, q))
    results = [_grade("odd_kink_nullified", at_zero, KINK_ZERO_TOL, KINK_ZERO_TOL * relax,
                      f"|I u(0)| <= {KINK_ZERO_TOL:g}")]

    right = blowup_profile(u, spec, "right", [1.0 - d for d in KINK_DISTS], q)
    left = blowup_profile(u, spec, "left", [-1.0 + d for d in KINK_DISTS], q)
    dists = np.array([row[0] for row in right.table])
    right_values = np.array([row[2] for row in right.table])
    left_values = np.array([row[2] for row in left.table])
    signs_ok = bool(np.all(right_values > 0) and np.all(left_values < 0))
    monotone = bool(np.all(np.diff(right_values) > 0) and np.all(np.diff(left_values) < 0))

    reference = fixtures.odd_kink_reference_slope(KINK_SIGMA, dists)
    deviation = max(abs(right.slope - reference), abs(left.slope - reference))
    blowup = _grade("odd_kink_blowup", deviation, KINK_SLOPE_TOL, KINK_SLOPE_TOL * relax,
                    f"|slope - ({reference:.4g})| <= {KINK_SLOPE_TOL:g} with signs")
    if not (signs_ok and monotone):
        blowup = FixtureResult(blowup.name, FAIL, deviation, blowup.target)
    results.append(blowup)

    # slope over the two closest points approaches -(sigma - 1)
    rate = -(KINK_SIGMA - 1.0)
    finest = math.log(right_values[-1] / right_values[-2]) / math.log(dists[-1] / dists[-2])
    results.append(_grade("odd_kink_rate", abs(finest - rate), KINK_SLOPE_TOL, KINK_SLOPE_TOL * relax,
                          f"|finest slope - ({rate:g})| <= {KINK_SLOPE_TOL:g}"))
    return results


def comparison_failure(grid: Grid, q: QuadratureScheme) -> FixtureResult:
    v, u = fixtures.comparison_pair(grid)
    prob = fixtures.comparison_problem(COMPARISON_SIGMA)
    super_report = certify_viscosity(v, prob, "super", COMPARISON_DELTA, q=q)
    sub_report = certify_viscosity(u, prob, "sub", COMPARISON_DELTA, q=q)
    outside = np.abs(grid.nodes) >= 1.0
    gap = u.at_node(0.0) - v.at_node(0.0)
    ok = (super_report.ok and sub_report.ok and sub_report.tested > 0 and gap > 0
          and np.array_equal(u.values[outside], v.values[outside]))
    return FixtureResult("comparison_failure", PASS if ok else FAIL, gap,
                         "u(0) - v(0) > 0, certificates hold")


def run_validate(h_factor: float = 1.0, normalization_scale: float = 1.0,
                 threads: int = 1) -> List[FixtureResult]:
    """Run every built-in fixture; failures are reported, not raised."""
    grid = Grid(DEFAULT_R, DEFAULT_H * h_factor)
    q = QuadratureScheme(normalization_scale=normalization_scale)
    relax = h_factor ** 2 if h_factor > 1.0 else 1.0
    logger.info(f"Validating at R={grid.R}, h={grid.h} ({grid.size} nodes)")

    results = [cosine_symbol(grid, q, relax, threads),
               near_two_consistency(grid, q, threads),
               explicit_solution(grid, q, relax)]
    results.extend(odd_kink(grid, q, relax))
    results.append(comparison_failure(grid, q))
    for result in results:
        log = logger.warning if result.failed else logger.info
        log(result.line())
    return results
