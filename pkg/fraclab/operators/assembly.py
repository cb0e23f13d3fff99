"""Matrix form of the linear operators restricted to a set of unknown nodes.

With the values outside the unknown block frozen (Dirichlet data and the
exterior extension), each discrete linear operator is affine in the unknowns:

    I_K(u)[interior] = A u[interior] + b.

A is symmetric Toeplitz because the stencil depends only on the offset.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.linalg import toeplitz

from ..errors import UsageError
from ..grid import GridFunction
from ..kernels import IsaacsOperator, KernelSpec
from .quadrature import QuadratureScheme, build_stencil, exterior_pair_integral

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AffineOperator:
    matrix: np.ndarray
    offset: np.ndarray

    def __call__(self, unknowns: np.ndarray) -> np.ndarray:
        return self.matrix @ unknowns + self.offset

    @property
    def diagonal(self) -> float:
        return float(self.matrix[0, 0])


def unknown_block(mask: np.ndarray) -> np.ndarray:
    """Indices of the unknowns; they must form one contiguous block."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise UsageError("No unknown nodes selected")
    if np.any(np.diff(idx) != 1):
        raise UsageError("Unknown nodes must be contiguous")
    return idx


def assemble_linear(spec: KernelSpec, data: GridFunction, mask: np.ndarray,
                    q: QuadratureScheme) -> AffineOperator:
    """Affine form of the linear operator on the masked nodes of ``data``.

    Values of ``data`` on the masked nodes are ignored; everything else is
    frozen into the offset.
    """
    idx = unknown_block(mask)
    grid = data.grid
    if np.max(np.abs(grid.nodes[idx])) > grid.R - 1.0 + 1e-9 * grid.h:
        raise UsageError("Unknown nodes must satisfy |x| <= R - 1")
    data.exterior.check_l1_sigma(spec.sigma)

    stencil = build_stencil(spec, grid, q)
    K = stencil.far_offset
    m = idx.size
    if K < m - 1:
        raise UsageError("Far cutoff shorter than the unknown block")

    column = np.array(stencil.weights[:m], dtype=float)
    column[0] = stencil.diagonal
    matrix = toeplitz(column)

    frozen = np.array(data.values, dtype=float)
    frozen[idx] = 0.0
    extended = data.with_values(frozen).extended_values(K)
    weights = stencil.weights[1:]
    offset = np.empty(m)
    for row, i in enumerate(idx):
        c = i + K
        pairs = extended[c + 1:c + K + 1] + extended[c - K:c][::-1]
        offset[row] = float(np.dot(weights, pairs))
        offset[row] += exterior_pair_integral(data, float(grid.nodes[i]), spec, stencil.far_cutoff, q)
    logger.debug(f"Assembled {m}x{m} operator for {spec.describe()}")
    return AffineOperator(matrix, offset)


def assemble_isaacs(op: IsaacsOperator, data: GridFunction, mask: np.ndarray,
                    q: QuadratureScheme) -> List[List[AffineOperator]]:
    return [[assemble_linear(spec, data, mask, q) for spec in row] for row in op.kernels]


def apply_isaacs(blocks: List[List[AffineOperator]], unknowns: np.ndarray) -> np.ndarray:
    """Node-wise min over rows of max over columns."""
    rows = [np.max(np.stack([block(unknowns) for block in row]), axis=0) for row in blocks]
    return np.min(np.stack(rows), axis=0)
