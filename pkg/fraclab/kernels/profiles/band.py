"""Seeded piecewise-constant multiplier on dyadic shells."""

from typing import Any, Dict, List

import numpy as np

from ..interfaces import MultiplierProfile


class BandProfile(MultiplierProfile):
    """kappa is constant on each shell 2^j <= |z| < 2^(j+1).

    Shell values are drawn uniformly from [lambda_lo, lambda_hi] with a seeded
    generator, so the same seed always yields the same kernel. Shells below
    2^min_shell and above 2^max_shell reuse the extreme values.
    """

    name = "band"

    def __init__(self, lambda_lo: float, lambda_hi: float, seed: int,
                 min_shell: int = -12, max_shell: int = 6):
        if not 0 < lambda_lo <= lambda_hi:
            raise ValueError(f"Band requires 0 < lambda <= Lambda, got ({lambda_lo}, {lambda_hi})")
        if min_shell > max_shell:
            raise ValueError("min_shell must not exceed max_shell")
        self.lambda_lo = float(lambda_lo)
        self.lambda_hi = float(lambda_hi)
        self.seed = int(seed)
        self.min_shell = int(min_shell)
        self.max_shell = int(max_shell)
        rng = np.random.default_rng(self.seed)
        self.shell_values = rng.uniform(self.lambda_lo, self.lambda_hi,
                                        size=self.max_shell - self.min_shell + 1)

    def _shell_index(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            j = np.floor(np.log2(z))
        j = np.clip(j, self.min_shell, self.max_shell)
        return (j - self.min_shell).astype(int)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.shell_values[self._shell_index(np.asarray(z, dtype=float))]

    def describe(self) -> Dict[str, Any]:
        return {
            "profile": self.name,
            "lambda": self.lambda_lo,
            "Lambda": self.lambda_hi,
            "seed": self.seed,
        }

    def breakpoints(self, lo: float, hi: float) -> List[float]:
        if hi <= lo or hi <= 0:
            return []
        points = []
        for j in range(self.min_shell + 1, self.max_shell + 1):
            edge = 2.0 ** j
            if lo < edge < hi:
                points.append(edge)
        return points
