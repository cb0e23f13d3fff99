"""Discrete checks of the viscosity sub- and supersolution inequalities."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError, UsageError
from ..grid import GridFunction
from ..kernels import IsaacsOperator, make_frac_laplacian
from ..operators import DEFAULT_SCHEME, QuadraticTest, QuadratureScheme, central_gradient, eval_I_delta
from .problem import ProblemSpec

logger = logging.getLogger(__name__)

KINDS = ("sub", "super")
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass(frozen=True)
class ViscosityCheck:
    outcome: str
    value: Optional[float] = None
    rhs: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.outcome != FAIL


def _ball_offsets(u: GridFunction, x: float, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    mask = u.grid.ball_mask(x, delta)
    return u.nodes[mask] - x, u.values[mask]


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise UsageError(f"kind must be one of {KINDS}, got '{kind}'")


def check_contact(u: GridFunction, x: float, test: QuadraticTest, kind: str, delta: float,
                  tol: float = 1e-12) -> None:
    """The test touches u at x from above (sub) or below (super) on the nodes of B_delta(x)."""
    _check_kind(kind)
    t, values = _ball_offsets(u, x, delta)
    gap = values - test(x + t)
    scale = tol * max(1.0, float(np.max(np.abs(values))))
    if abs(u.at_node(x) - test(x)) > scale:
        raise UsageError(f"Test does not touch u at x={x}: gap {u.at_node(x) - test(x):.3e}")
    worst = float(np.max(gap)) if kind == "sub" else float(np.max(-gap))
    if worst > scale:
        side = "above" if kind == "sub" else "below"
        raise UsageError(f"Test does not touch u from {side} on B_{delta}({x}): violation {worst:.3e}")


def tangent_test(u: GridFunction, x: float, kind: str, delta: float,
                 margin: Optional[float] = None) -> QuadraticTest:
    """Quadratic touching u at x on the nodes of B_delta(x).

    Value and slope come from the discrete Taylor data at x. The curvature is
    the smallest (sub) or largest (super) value keeping the contact, pushed by
    ``margin`` so the contact is strict away from x.
    """
    _check_kind(kind)
    u_x = u.at_node(x)
    slope = central_gradient(u, x)
    t, values = _ball_offsets(u, x, delta)
    off = t != 0
    if not np.any(off):
        raise UsageError(f"B_{delta}({x}) holds no node besides x")
    needed = 2.0 * (values[off] - u_x - slope * t[off]) / t[off] ** 2
    if kind == "sub":
        curvature = float(np.max(needed))
    else:
        curvature = float(np.min(needed))
    if margin is None:
        margin = 1e-8 * max(1.0, abs(curvature))
    curvature += margin if kind == "sub" else -margin
    return QuadraticTest(center=x, value=u_x, slope=slope, curvature=curvature)


def check_viscosity_inequality(u: GridFunction, x: float, test: QuadraticTest, kind: str,
                               prob: ProblemSpec, delta: float, epsilon: float = 0.0,
                               q: QuadratureScheme = DEFAULT_SCHEME,
                               tol: float = 1e-9, gradient_tol: float = 1e-10) -> ViscosityCheck:
    """Signed viscosity inequality with the test on B_delta(x) and u outside.

    sub:   -eps I_delta(fracLap) - |D test + p|^gamma I_delta(op) <= f(x)
    super: the same with >=. Skipped when the shifted test gradient vanishes.
    """
    if x ** 2 >= prob.radius ** 2:
        raise DomainError(f"x={x} lies outside B_{prob.radius}")
    check_contact(u, x, test, kind, delta)
    drift = abs(prob.gradient_scale * test.gradient(x) + prob.shift_p)
    if drift <= gradient_tol:
        return ViscosityCheck(SKIPPED)

    value = -(drift ** prob.gamma) * eval_I_delta(u, test, prob.operator, x, delta, q)
    if epsilon > 0:
        viscous = IsaacsOperator.single(make_frac_laplacian(prob.sigma))
        value -= epsilon * eval_I_delta(u, test, viscous, x, delta, q)
    f_x = float(prob.rhs_values(u.grid)[u.grid.index_of(x)])
    holds = value <= f_x + tol if kind == "sub" else value >= f_x - tol
    return ViscosityCheck(PASS if holds else FAIL, value, f_x)


@dataclass
class CertificationReport:
    kind: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: List[float] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def tested(self) -> int:
        return self.passed + self.failed


def certify_viscosity(u: GridFunction, prob: ProblemSpec, kind: str, delta: float,
                      nodes: Optional[Sequence[float]] = None, epsilon: float = 0.0,
                      q: QuadratureScheme = DEFAULT_SCHEME) -> CertificationReport:
    """Run tangent tests at every node of B_radius (or at ``nodes``); skipped counts as non-failing."""
    _check_kind(kind)
    if nodes is None:
        nodes = u.nodes[prob.interior_mask(u.grid)]
    report = CertificationReport(kind)
    for x in nodes:
        x = float(x)
        test = tangent_test(u, x, kind, delta)
        check = check_viscosity_inequality(u, x, test, kind, prob, delta, epsilon, q)
        if check.outcome == PASS:
            report.passed += 1
        elif check.outcome == SKIPPED:
            report.skipped += 1
        else:
            report.failed += 1
            report.failures.append(x)
    logger.info(f"{kind}solution certificate: {report.passed} passed, {report.failed} failed, "
                f"{report.skipped} skipped")
    return report
