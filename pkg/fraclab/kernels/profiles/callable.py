"""User-supplied multiplier functions."""

from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..interfaces import MultiplierProfile


class CallableProfile(MultiplierProfile):
    """Wraps a vectorized callable kappa(|z|)."""

    name = "callable"

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], label: str = "callable",
                 breakpoints: Optional[Sequence[float]] = None):
        self.func = func
        self.label = label
        self._breakpoints = sorted(breakpoints or [])

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(np.asarray(z, dtype=float)), dtype=float) * np.ones(np.shape(z))

    def describe(self) -> Dict[str, Any]:
        return {"profile": self.name, "label": self.label}

    def breakpoints(self, lo: float, hi: float) -> List[float]:
        return [b for b in self._breakpoints if lo < b < hi]
