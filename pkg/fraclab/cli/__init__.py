"""Batch command line driver."""

from .main import cli
from .runners import run_counterexample, run_eval, run_probe, run_solve
from .validation import FixtureResult, run_validate

__all__ = [
    "cli",
    "run_counterexample",
    "run_eval",
    "run_probe",
    "run_solve",
    "FixtureResult",
    "run_validate",
]
