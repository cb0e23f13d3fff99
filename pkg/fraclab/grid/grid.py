"""Uniform truncated grids and grid functions extended to the whole line."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np

from ..errors import DomainError, NotInL1SigmaError, UsageError

logger = logging.getLogger(__name__)

EXTERIOR_TAGS = ("zero", "constant", "affine", "power", "cosine", "callable")


@dataclass(frozen=True)
class Grid:
    """Uniform nodes {-R, -R + h, ..., R}; 0 is always a node."""
    R: float
    h: float

    def __post_init__(self):
        if self.h <= 0:
            raise DomainError(f"Grid spacing must be positive, got {self.h}")
        if self.R < 2:
            raise DomainError(f"Truncation radius must be at least 2, got {self.R}")
        ratio = self.R / self.h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise DomainError(f"R/h must be an integer, got R={self.R}, h={self.h}")

    @property
    def half_count(self) -> int:
        """Number of nodes strictly right of 0."""
        return int(round(self.R / self.h))

    @property
    def size(self) -> int:
        return 2 * self.half_count + 1

    @property
    def nodes(self) -> np.ndarray:
        n = self.half_count
        return self.h * np.arange(-n, n + 1, dtype=float)

    def index_of(self, x: float) -> int:
        """Index of the node at x; x must be a node up to rounding."""
        k = int(round(x / self.h))
        if abs(k * self.h - x) > 1e-9 * self.h or abs(k) > self.half_count:
            raise UsageError(f"{x} is not a node of the grid (R={self.R}, h={self.h})")
        return k + self.half_count

    def snap(self, x: float) -> float:
        """Nearest node to x."""
        k = int(np.clip(round(x / self.h), -self.half_count, self.half_count))
        return k * self.h

    def ball_mask(self, center: float, r: float) -> np.ndarray:
        """Closed ball |x - center| <= r over the nodes (rounding-tolerant)."""
        return np.abs(self.nodes - center) <= r + 1e-9 * self.h

    def interior_mask(self, radius: float = 1.0) -> np.ndarray:
        """Open ball |x| < radius over the nodes."""
        return np.abs(self.nodes) < radius - 1e-9 * self.h

    def refined(self, factor: int) -> "Grid":
        return Grid(self.R, self.h / factor)

    def describe(self) -> Dict[str, float]:
        return {"R": self.R, "h": self.h}


@dataclass(frozen=True)
class ExteriorExtension:
    """Behaviour of a function on |x| > R.

    Tags:
        zero                      0
        constant  c               c
        affine    a, b            a + b x for x > 0, a_left + b_left x for x < 0
        power     s, beta         s |x|^beta
        cosine    A, omega, phi   A cos(omega x + phi)
        callable  func, growth    func(x); growth bounds |func(x)| <= C(1 + |x|^growth)
    """
    tag: str = "zero"
    c: float = 0.0
    a: float = 0.0
    b: float = 0.0
    a_left: Optional[float] = None
    b_left: Optional[float] = None
    s: float = 0.0
    beta: float = 0.0
    amplitude: float = 0.0
    omega: float = 1.0
    phi: float = 0.0
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    growth: float = 0.0

    def __post_init__(self):
        if self.tag not in EXTERIOR_TAGS:
            raise UsageError(f"Unknown exterior tag '{self.tag}'. Available: {list(EXTERIOR_TAGS)}")
        if self.tag == "power" and self.beta < 0:
            raise DomainError(f"Power exterior needs beta >= 0, got {self.beta}")
        if self.tag == "callable" and self.func is None:
            raise UsageError("Callable exterior needs func")

    @classmethod
    def zero(cls) -> "ExteriorExtension":
        return cls("zero")

    @classmethod
    def constant(cls, c: float) -> "ExteriorExtension":
        return cls("constant", c=float(c))

    @classmethod
    def affine(cls, a: float, b: float, a_left: Optional[float] = None,
               b_left: Optional[float] = None) -> "ExteriorExtension":
        return cls("affine", a=float(a), b=float(b),
                   a_left=None if a_left is None else float(a_left),
                   b_left=None if b_left is None else float(b_left))

    @classmethod
    def power(cls, s: float, beta: float) -> "ExteriorExtension":
        return cls("power", s=float(s), beta=float(beta))

    @classmethod
    def cosine(cls, amplitude: float = 1.0, omega: float = 1.0, phi: float = 0.0) -> "ExteriorExtension":
        return cls("cosine", amplitude=float(amplitude), omega=float(omega), phi=float(phi))

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray],
                      growth: float = 0.0) -> "ExteriorExtension":
        return cls("callable", func=func, growth=float(growth))

    @property
    def left_coefficients(self):
        a_left = self.a if self.a_left is None else self.a_left
        b_left = self.b if self.b_left is None else self.b_left
        return a_left, b_left

    def evaluate(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.tag == "zero":
            return np.zeros_like(y)
        if self.tag == "constant":
            return np.full_like(y, self.c)
        if self.tag == "affine":
            a_left, b_left = self.left_coefficients
            return np.where(y >= 0, self.a + self.b * y, a_left + b_left * y)
        if self.tag == "power":
            return self.s * np.abs(y) ** self.beta
        if self.tag == "cosine":
            return self.amplitude * np.cos(self.omega * y + self.phi)
        return np.asarray(self.func(y), dtype=float) * np.ones_like(y)

    def __call__(self, y):
        values = self.evaluate(y)
        return float(values) if np.ndim(y) == 0 else values

    @property
    def growth_exponent(self) -> float:
        """Polynomial growth rate of |extension(y)| as |y| -> infinity."""
        if self.tag == "affine":
            return 1.0 if (self.b != 0 or self.left_coefficients[1] != 0) else 0.0
        if self.tag == "power":
            return self.beta if self.s != 0 else 0.0
        if self.tag == "callable":
            return self.growth
        return 0.0

    def check_l1_sigma(self, sigma: float) -> None:
        """Raise NotInL1SigmaError when the tail diverges against |y|^(-1-sigma)."""
        growth = self.growth_exponent
        if growth > 0 and growth >= sigma:
            raise NotInL1SigmaError(
                f"not in L1_sigma: exterior '{self.tag}' grows like |y|^{growth:g} with sigma={sigma:g}"
            )

    def map_affine(self, scale: float, a: float = 0.0, b: float = 0.0) -> "ExteriorExtension":
        """Extension of scale * E(y) + a + b y."""
        if self.tag == "zero":
            return ExteriorExtension.affine(a, b) if (a or b) else ExteriorExtension.zero()
        if self.tag == "constant":
            if b == 0:
                return ExteriorExtension.constant(scale * self.c + a)
            return ExteriorExtension.affine(scale * self.c + a, b)
        if self.tag == "affine":
            a_left, b_left = self.left_coefficients
            return ExteriorExtension.affine(scale * self.a + a, scale * self.b + b,
                                            scale * a_left + a, scale * b_left + b)
        growth = max(self.growth_exponent, 1.0 if b else 0.0)
        base = self
        return ExteriorExtension.from_callable(lambda y: scale * base.evaluate(y) + a + b * y, growth=growth)

    def to_dict(self) -> Dict[str, Any]:
        if self.tag == "callable":
            raise UsageError("Callable exterior extensions cannot be serialized")
        fields = {
            "zero": [],
            "constant": ["c"],
            "affine": ["a", "b", "a_left", "b_left"],
            "power": ["s", "beta"],
            "cosine": ["amplitude", "omega", "phi"],
        }[self.tag]
        data = {"tag": self.tag}
        data.update({name: getattr(self, name) for name in fields})
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExteriorExtension":
        data = dict(data)
        tag = data.pop("tag", "zero")
        return cls(tag, **data)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values on a grid plus an exterior extension covering |x| > R."""
    grid: Grid
    values: np.ndarray
    exterior: ExteriorExtension = field(default_factory=ExteriorExtension.zero)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise UsageError(f"Expected {self.grid.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("Grid function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray],
                      exterior: Optional[ExteriorExtension] = None) -> "GridFunction":
        values = np.asarray(func(grid.nodes), dtype=float) * np.ones(grid.size)
        return cls(grid, values, exterior or ExteriorExtension.zero())

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def at_node(self, x: float) -> float:
        return float(self.values[self.grid.index_of(x)])

    def evaluate(self, y) -> np.ndarray:
        """Linear interpolation on [-R, R], exterior formula outside."""
        y = np.asarray(y, dtype=float)
        inside = np.abs(y) <= self.grid.R
        result = np.where(inside, np.interp(y, self.grid.nodes, self.values), 0.0)
        if np.any(~inside):
            result = np.where(inside, result, self.exterior.evaluate(np.where(inside, self.grid.R + 1.0, y)))
        return result

    def extended_values(self, extra: int) -> np.ndarray:
        """Values on the node lattice extended by ``extra`` nodes on each side."""
        n = self.grid.half_count
        outer = self.grid.h * np.arange(n + 1, n + extra + 1, dtype=float)
        right = self.exterior.evaluate(outer)
        left = self.exterior.evaluate(-outer[::-1])
        return np.concatenate([left, self.values, right])

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values, self.exterior)

    def map_affine(self, scale: float, a: float = 0.0, b: float = 0.0) -> "GridFunction":
        """scale * u + a + b x, with the exterior transformed alike."""
        return GridFunction(self.grid, scale * self.values + a + b * self.nodes,
                            self.exterior.map_affine(scale, a, b))

    def sup_norm(self, mask: Optional[np.ndarray] = None) -> float:
        values = self.values if mask is None else self.values[mask]
        return float(np.max(np.abs(values))) if values.size else 0.0
