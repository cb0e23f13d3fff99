"""Grid module initialization."""

from .grid import ExteriorExtension, Grid, GridFunction
from .measurements import (AffineFit, best_affine_fit, c1alpha_seminorm, holder_seminorm,
                           oscillation, tail_norm)
from .io import read_grid_function, write_frame, write_grid_function

__all__ = [
    "ExteriorExtension", "Grid", "GridFunction",
    "AffineFit", "best_affine_fit", "c1alpha_seminorm", "holder_seminorm",
    "oscillation", "tail_norm",
    "read_grid_function", "write_frame", "write_grid_function",
]
