"""Quadrature evaluation of the nonlocal operators."""

from .assembly import AffineOperator, apply_isaacs, assemble_isaacs, assemble_linear
from .evaluators import (DEFAULT_SCHEME, QuadraticTest, central_gradient,
                         central_second_difference, drift_field, eval_I_delta, eval_frac_p_laplacian,
                         eval_isaacs, eval_linear, eval_local_limit, eval_pucci, monotone_drift, sweep)
from .quadrature import QuadratureScheme, Stencil, build_stencil, inner_moment, tail_mass

__all__ = [
    "AffineOperator",
    "apply_isaacs",
    "assemble_isaacs",
    "assemble_linear",
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
    "QuadratureScheme",
    "Stencil",
    "build_stencil",
    "inner_moment",
    "tail_mass",
]
