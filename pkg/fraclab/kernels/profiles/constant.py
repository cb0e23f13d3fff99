"""Constant multiplier: the fractional Laplacian and its scalings."""

from typing import Any, Dict, Optional

import numpy as np

from ..interfaces import MultiplierProfile


class ConstantProfile(MultiplierProfile):
    """kappa(z) = value for every z != 0."""

    name = "constant"

    def __init__(self, value: float = 1.0):
        if value <= 0:
            raise ValueError(f"Constant multiplier must be positive, got {value}")
        self.value = float(value)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.shape(z), self.value)

    def describe(self) -> Dict[str, Any]:
        return {"profile": self.name, "value": self.value}

    @property
    def constant_value(self) -> Optional[float]:
        return self.value

    def __eq__(self, other) -> bool:
        return isinstance(other, ConstantProfile) and other.value == self.value

    def __hash__(self) -> int:
        return hash((self.name, self.value))
