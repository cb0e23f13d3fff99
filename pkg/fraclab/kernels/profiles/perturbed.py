"""Multiplier converging to a constant at the origin with a power modulus."""

from typing import Any, Dict, List

import numpy as np

from ..interfaces import MultiplierProfile


class PerturbedProfile(MultiplierProfile):
    """kappa(z) = k + amplitude * min(|z|, 1)^omega_exponent.

    The matching modulus of continuity is omega(t) = amplitude * min(t, 1)^omega_exponent.
    """

    name = "perturbed"

    def __init__(self, k: float, omega_exponent: float, amplitude: float):
        if k <= 0:
            raise ValueError(f"Limit multiplier must be positive, got {k}")
        if omega_exponent <= 0:
            raise ValueError(f"omega_exponent must be positive, got {omega_exponent}")
        if amplitude < 0:
            raise ValueError(f"amplitude must be nonnegative, got {amplitude}")
        self.k = float(k)
        self.omega_exponent = float(omega_exponent)
        self.amplitude = float(amplitude)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.k + self.modulus(z)

    def modulus(self, t):
        return self.amplitude * np.minimum(np.abs(t), 1.0) ** self.omega_exponent

    def describe(self) -> Dict[str, Any]:
        return {
            "profile": self.name,
            "k": self.k,
            "omega_exponent": self.omega_exponent,
            "amplitude": self.amplitude,
        }

    def breakpoints(self, lo: float, hi: float) -> List[float]:
        return [1.0] if lo < 1.0 < hi else []
