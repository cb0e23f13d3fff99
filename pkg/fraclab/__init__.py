"""fraclab

Numerical lab for degenerate fractional elliptic equations: quadrature of
nonlocal operators, a vanishing-viscosity solver and regularity probes.
"""

__version__ = "0.1.0"

from fraclab.grid import ExteriorExtension, Grid, GridFunction
from fraclab.kernels import IsaacsOperator, KernelSpec, make_frac_laplacian
from fraclab.solver import ProblemSpec, SolveConfig, solve_vanishing_viscosity

__all__ = [
    "ExteriorExtension",
    "Grid",
    "GridFunction",
    "IsaacsOperator",
    "KernelSpec",
    "make_frac_laplacian",
    "ProblemSpec",
    "SolveConfig",
    "solve_vanishing_viscosity",
]
