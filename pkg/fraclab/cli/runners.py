"""Runners behind the solve, eval, probe and counterexample commands.

Each runner takes a validated ExperimentConfig, writes its outputs into
``out_dir`` and returns the process exit code.
"""

import logging
from pathlib import Path
from typing import Callable, Iterable, List, Optional

import numpy as np
import pandas as pd

from .. import fixtures
from ..config import ExperimentConfig
from ..errors import UsageError
from ..grid import (ExteriorExtension, Grid, GridFunction, c1alpha_seminorm, read_grid_function, write_frame,
                    write_grid_function)
from ..kernels import IsaacsOperator, make_frac_laplacian
from ..operators import (QuadratureScheme, eval_frac_p_laplacian, eval_isaacs, eval_linear,
                         eval_local_limit, eval_pucci, sweep)
from ..probe import blowup_profile, fit_holder_exponent, flatness_trace, normalize_for_flatness
from ..solver import ProblemSpec, SolveConfig, SolveReport, solve_vanishing_viscosity

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FIXTURE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NOT_CONVERGED = 3


def write_report(lines: Iterable[str], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        for line in lines:
            f.write(f"{line}\n")


def build_problem(cfg: ExperimentConfig, grid: Grid, q: QuadratureScheme) -> ProblemSpec:
    op = cfg.kernel.build_operator()
    if cfg.problem.fixture == "explicit":
        prob, _, c_star = fixtures.explicit_problem(grid, cfg.kernel.sigma, cfg.problem.gamma, op, q)
        logger.info(f"Explicit fixture: C* = {c_star:.10g}")
        return prob.replace(shift_p=cfg.problem.shift_p)
    return ProblemSpec(gamma=cfg.problem.gamma, operator=op, rhs=cfg.problem.rhs,
                       exterior=cfg.exterior.build(), shift_p=cfg.problem.shift_p)


def build_solve_config(cfg: ExperimentConfig, grid: Grid, q: QuadratureScheme) -> SolveConfig:
    solver = cfg.solver
    return SolveConfig(grid=grid, epsilon_schedule=tuple(solver.epsilon_schedule),
                       cfl_factor=solver.cfl_factor, tol_residual=solver.tol_residual,
                       max_iters=solver.max_iters, log_every=solver.log_every, scheme=q)


def solve(cfg: ExperimentConfig) -> SolveReport:
    grid = cfg.build_grid()
    q = cfg.quadrature.build()
    prob = build_problem(cfg, grid, q)
    return solve_vanishing_viscosity(prob, build_solve_config(cfg, grid, q))


def build_function(cfg: ExperimentConfig, function: str, input_path: Optional[str],
                   exponent: float, slope: float) -> GridFunction:
    """The function an eval or probe run acts on."""
    if function == "file":
        return read_grid_function(input_path)
    if function == "solve":
        return solve(cfg).solution
    grid = cfg.build_grid()
    if function == "cosine":
        return fixtures.cosine_function(grid)
    if function == "gaussian":
        return fixtures.gaussian(grid)
    if function == "odd_kink":
        return fixtures.odd_kink(grid)
    if function == "explicit":
        return fixtures.explicit_solution(grid, cfg.kernel.sigma, cfg.problem.gamma)
    if function == "power":
        exterior = ExteriorExtension.power(1.0, exponent)
        return GridFunction(grid, np.abs(grid.nodes) ** exponent, exterior)
    if function == "affine":
        return GridFunction(grid, slope * grid.nodes, ExteriorExtension.affine(0.0, slope))
    raise UsageError(f"Unknown function '{function}'")


def _evaluator(cfg: ExperimentConfig, op: IsaacsOperator,
               q: QuadratureScheme) -> Callable[[GridFunction, float], float]:
    name = cfg.eval.operator
    sigma = op.sigma
    if name == "linear":
        spec = op.kernels[0][0]
        return lambda u, x: eval_linear(u, spec, x, q)
    if name == "isaacs":
        return lambda u, x: eval_isaacs(u, op, x, q)
    if name in ("pucci_plus", "pucci_minus"):
        sign = name.split("_")[1]
        return lambda u, x: eval_pucci(u, x, sign, sigma, op.lambda_lo, op.lambda_hi, q)
    if name == "local_limit":
        multipliers = op.limit_multipliers()
        return lambda u, x: eval_local_limit(u, multipliers, x)
    return lambda u, x: eval_frac_p_laplacian(u, cfg.eval.p_exp, cfg.eval.r_p, x, sigma, q)


def run_solve(cfg: ExperimentConfig, out_dir: str, threads: int = 1) -> int:
    """Solve, write solution.csv and report.txt; exit 3 when a stage did not converge."""
    report = solve(cfg)
    out = Path(out_dir)
    write_grid_function(report.solution, str(out / "solution.csv"), config=cfg.resolved())
    write_report(report.summary_lines(), out / "report.txt")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def run_eval(cfg: ExperimentConfig, out_dir: str, threads: int = 1) -> int:
    """Apply the configured operator across interior nodes and write eval.csv."""
    u = build_function(cfg, cfg.eval.function, cfg.eval.input, cfg.eval.exponent, cfg.eval.slope)
    q = cfg.quadrature.build()
    op = cfg.kernel.build_operator()
    radius = u.grid.R - 1.0 if cfg.eval.radius is None else cfg.eval.radius
    nodes = u.nodes[u.grid.ball_mask(0.0, min(radius, u.grid.R - 1.0))]
    values = sweep(_evaluator(cfg, op, q), u, nodes, threads)
    frame = pd.DataFrame({"x": nodes, "value": values})
    write_frame(frame, str(Path(out_dir) / "eval.csv"), {"config": cfg.resolved()})
    logger.info(f"Evaluated {cfg.eval.operator} at {len(nodes)} nodes")
    return EXIT_OK


def run_probe(cfg: ExperimentConfig, out_dir: str, threads: int = 1) -> int:
    """Holder fit, C^(1,alpha) seminorm on B_scales[0] and optionally a flatness trace.

    With ``normalize`` the trace runs on u / (|u|_inf + |f|_inf^((sigma-1)/(1+gamma)) / eta).
    """
    probe = cfg.probe
    u = build_function(cfg, probe.function, probe.input, probe.exponent, probe.slope)
    out = Path(out_dir)
    comments = {"config": cfg.resolved()}

    report = fit_holder_exponent(u, probe.center, probe.scales)
    scales = pd.DataFrame(report.scale_table, columns=["r", "oscillation"])
    write_frame(scales, str(out / "scales.csv"), comments)
    lines: List[str] = list(report.summary_lines())
    seminorm = c1alpha_seminorm(u, probe.alpha, probe.center, probe.scales[0])
    lines.append(f"c1alpha_seminorm = {seminorm:.17g}")

    if probe.flatness:
        traced = u
        if probe.normalize:
            f_sup = abs(cfg.problem.rhs) if probe.rhs_sup is None else probe.rhs_sup
            traced = normalize_for_flatness(u, f_sup, cfg.kernel.sigma, cfg.problem.gamma, probe.eta)
            lines.append(f"normalized_sup = {traced.sup_norm():.17g}")
        trace = flatness_trace(traced, probe.center, probe.rho, probe.depth, probe.C_bound,
                               probe.alpha, probe.alpha_bar)
        write_frame(pd.DataFrame(trace.as_rows()), str(out / "flatness.csv"), comments)
        lines.append(f"flatness_passed = {str(trace.passed).lower()}")
        if trace.slope is not None:
            lines.append(f"flatness_slope = {trace.slope:.17g}")
            lines.append(f"flatness_regression_residual = {trace.regression_residual:.17g}")
    write_report(lines, out / "report.txt")
    return EXIT_OK


def run_counterexample(cfg: ExperimentConfig, out_dir: str, threads: int = 1) -> int:
    """Blow-up table of the fractional Laplacian on the odd kink near both ends of (-1, 1)."""
    grid = cfg.build_grid()
    q = cfg.quadrature.build()
    u = fixtures.odd_kink(grid)
    spec = make_frac_laplacian(cfg.kernel.sigma)
    dists = cfg.counterexample.dists

    rows = []
    lines = [f"value_at_zero = {eval_linear(u, spec, 0.0, q):.17g}"]
    for side, points in (("left", [-1.0 + d for d in dists]), ("right", [1.0 - d for d in dists])):
        profile = blowup_profile(u, spec, side, points, q)
        rows.extend({"side": side, "dist": d, "x": x, "value": v} for d, x, v in profile.table)
        lines.append(f"{side}_slope = {profile.slope:.17g}")
        lines.append(f"{side}_regression_residual = {profile.regression_residual:.17g}")
    snapped = [d for d, _, _ in profile.table]
    if 1.0 < spec.sigma < 2.0:
        lines.append(f"reference_slope = {fixtures.odd_kink_reference_slope(spec.sigma, snapped):.17g}")
        lines.append(f"asymptotic_slope = {-(spec.sigma - 1.0):.17g}")
    out = Path(out_dir)
    write_frame(pd.DataFrame(rows), str(out / "counterexample.csv"), {"config": cfg.resolved()})
    write_report(lines, out / "report.txt")
    return EXIT_OK
