"""Problem data, solver settings and solve reports."""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError, UsageError
from ..grid import ExteriorExtension, Grid, GridFunction
from ..kernels import IsaacsOperator
from ..operators import DEFAULT_SCHEME, QuadratureScheme

RightHandSide = Union[float, Callable[[np.ndarray], np.ndarray], GridFunction]


def default_epsilon_schedule(stages: int = 6, start: float = 0.1) -> Tuple[float, ...]:
    """Geometric schedule start * 2^-k, k = 0..stages-1."""
    return tuple(start * 2.0 ** (-k) for k in range(stages))


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """-eps L u - |gradient_scale Du + p|^gamma I(u) = f in B_radius, u = g outside.

    ``boundary`` gives the Dirichlet data on grid nodes with |x| >= radius;
    it defaults to the exterior extension itself.
    """
    gamma: float
    operator: IsaacsOperator
    rhs: RightHandSide = 0.0
    exterior: ExteriorExtension = field(default_factory=ExteriorExtension.zero)
    boundary: Optional[Callable[[np.ndarray], np.ndarray]] = None
    shift_p: float = 0.0
    gradient_scale: float = 1.0
    radius: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"gamma must be nonnegative, got {self.gamma}")
        if self.gradient_scale <= 0:
            raise DomainError(f"gradient_scale must be positive, got {self.gradient_scale}")
        if self.radius <= 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        if not np.isfinite(self.shift_p):
            raise DomainError("shift_p must be finite")
        self.exterior.check_l1_sigma(self.operator.sigma)

    @property
    def sigma(self) -> float:
        return self.operator.sigma

    def interior_mask(self, grid: Grid) -> np.ndarray:
        if grid.R - 1.0 < self.radius - 1e-12:
            raise UsageError(f"Grid radius R={grid.R} must be at least radius + 1 = {self.radius + 1.0}")
        return grid.interior_mask(self.radius)

    def rhs_values(self, grid: Grid) -> np.ndarray:
        """f on every node of the grid."""
        if isinstance(self.rhs, GridFunction):
            if self.rhs.grid == grid:
                values = np.array(self.rhs.values)
            else:
                values = self.rhs.evaluate(grid.nodes)
        elif callable(self.rhs):
            values = np.asarray(self.rhs(grid.nodes), dtype=float) * np.ones(grid.size)
        else:
            values = np.full(grid.size, float(self.rhs))
        if not np.all(np.isfinite(values)):
            raise DomainError("Right-hand side must be bounded")
        return values

    def boundary_values(self, grid: Grid) -> np.ndarray:
        nodes = grid.nodes
        source = self.boundary if self.boundary is not None else self.exterior.evaluate
        return np.asarray(source(nodes), dtype=float) * np.ones(grid.size)

    def initial_guess(self, grid: Grid, interior: Optional[np.ndarray] = None) -> GridFunction:
        """Dirichlet data outside B_radius and ``interior`` (default 0) inside."""
        mask = self.interior_mask(grid)
        values = self.boundary_values(grid)
        values[mask] = 0.0 if interior is None else np.asarray(interior, dtype=float)
        return GridFunction(grid, values, self.exterior)

    def replace(self, **changes) -> "ProblemSpec":
        params = dict(gamma=self.gamma, operator=self.operator, rhs=self.rhs, exterior=self.exterior,
                      boundary=self.boundary, shift_p=self.shift_p,
                      gradient_scale=self.gradient_scale, radius=self.radius)
        params.update(changes)
        return ProblemSpec(**params)


@dataclass(frozen=True)
class SolveConfig:
    grid: Grid
    epsilon_schedule: Tuple[float, ...] = field(default_factory=default_epsilon_schedule)
    cfl_factor: float = 0.5
    tol_residual: float = 1e-6
    max_iters: int = 200_000
    log_every: int = 5_000
    scheme: QuadratureScheme = DEFAULT_SCHEME

    def __post_init__(self):
        schedule = tuple(float(e) for e in self.epsilon_schedule)
        object.__setattr__(self, "epsilon_schedule", schedule)
        if not schedule:
            raise UsageError("epsilon_schedule must not be empty")
        if any(e <= 0 for e in schedule):
            raise DomainError("epsilon_schedule entries must be positive")
        if any(b >= a for a, b in zip(schedule[:-1], schedule[1:])):
            raise DomainError("epsilon_schedule must be strictly decreasing")
        if not 0.0 < self.cfl_factor < 1.0:
            raise DomainError(f"cfl_factor must lie in (0, 1), got {self.cfl_factor}")
        if self.tol_residual <= 0:
            raise DomainError("tol_residual must be positive")
        if self.max_iters < 1:
            raise DomainError("max_iters must be a positive integer")


@dataclass(frozen=True)
class StageReport:
    epsilon: float
    iterations: int
    residual: float
    converged: bool

    @property
    def status(self) -> str:
        return "converged" if self.converged else "max_iters"


@dataclass(frozen=True, eq=False)
class SolveReport:
    solution: GridFunction
    stages: List[StageReport]
    increments: List[float]

    @property
    def converged(self) -> bool:
        return all(stage.converged for stage in self.stages)

    @property
    def failed_stages(self) -> List[int]:
        return [k for k, stage in enumerate(self.stages) if not stage.converged]

    def summary_lines(self) -> Sequence[str]:
        """Flat key-value block for reports."""
        lines = [
            f"converged = {str(self.converged).lower()}",
            f"stages = {len(self.stages)}",
        ]
        for k, stage in enumerate(self.stages):
            lines.append(f"stage.{k}.epsilon = {stage.epsilon:.17g}")
            lines.append(f"stage.{k}.iterations = {stage.iterations}")
            lines.append(f"stage.{k}.residual = {stage.residual:.17g}")
            lines.append(f"stage.{k}.status = {stage.status}")
        for k, increment in enumerate(self.increments):
            lines.append(f"increment.{k} = {increment:.17g}")
        return lines
