"""Vanishing-viscosity solver and viscosity-inequality checks."""

from .problem import ProblemSpec, SolveConfig, SolveReport, StageReport, default_epsilon_schedule
from .scheme import (DiscreteProblem, discretize, pseudo_time_step, rescale_large_shift, residual,
                     solve_vanishing_viscosity, solve_viscous, stable_dt)
from .viscosity import (CertificationReport, ViscosityCheck, certify_viscosity, check_contact,
                        check_viscosity_inequality, tangent_test)

__all__ = [
    "ProblemSpec",
    "SolveConfig",
    "SolveReport",
    "StageReport",
    "default_epsilon_schedule",
    "DiscreteProblem",
    "discretize",
    "pseudo_time_step",
    "rescale_large_shift",
    "residual",
    "solve_vanishing_viscosity",
    "solve_viscous",
    "stable_dt",
    "CertificationReport",
    "ViscosityCheck",
    "certify_viscosity",
    "check_contact",
    "check_viscosity_inequality",
    "tangent_test",
]
