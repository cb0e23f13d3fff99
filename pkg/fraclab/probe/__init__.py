"""Regularity probes."""

from .regularity import (BlowupProfile, FlatnessEntry, FlatnessTrace, RegularityReport,
                         blowup_profile, fit_holder_exponent, flatness_trace,
                         normalize_for_flatness)

__all__ = [
    "BlowupProfile",
    "FlatnessEntry",
    "FlatnessTrace",
    "RegularityReport",
    "blowup_profile",
    "fit_holder_exponent",
    "flatness_trace",
    "normalize_for_flatness",
]
