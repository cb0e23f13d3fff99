"""Multiplier profile abstraction.

A kernel of the ellipticity class is written K(z) = C_sigma * kappa(z) / |z|^(1+sigma);
profiles supply kappa and whatever structure the quadrature can exploit.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import numpy as np


class MultiplierProfile(ABC):
    """Abstract base class for multiplier profiles kappa(z)."""

    name: str = "profile"

    @abstractmethod
    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Evaluate kappa at nonzero points; must be even in z."""
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Return the parameters that reproduce this profile."""
        pass

    def __call__(self, z):
        values = self.evaluate(np.abs(np.asarray(z, dtype=float)))
        if np.ndim(z) == 0:
            return float(values)
        return values

    @property
    def constant_value(self) -> Optional[float]:
        """The constant value of kappa, or None when kappa varies."""
        return None

    def breakpoints(self, lo: float, hi: float) -> List[float]:
        """Points in (lo, hi) where kappa is not smooth."""
        return []
