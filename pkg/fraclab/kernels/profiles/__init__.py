"""Multiplier profiles available to kernel families."""

from .constant import ConstantProfile
from .band import BandProfile
from .perturbed import PerturbedProfile
from .callable import CallableProfile

__all__ = ["ConstantProfile", "BandProfile", "PerturbedProfile", "CallableProfile"]
