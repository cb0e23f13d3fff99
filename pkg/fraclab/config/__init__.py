"""Configuration module initialization."""

from .settings import (CounterexampleConfig, EvalConfig, ExperimentConfig, ExteriorConfig, GridConfig,
                       KernelConfig, LoggingConfig, ProbeConfig, ProblemConfig, QuadratureConfig,
                       SolverConfig, configure_logging)

__all__ = [
    "CounterexampleConfig",
    "EvalConfig",
    "ExperimentConfig",
    "ExteriorConfig",
    "GridConfig",
    "KernelConfig",
    "LoggingConfig",
    "ProbeConfig",
    "ProblemConfig",
    "QuadratureConfig",
    "SolverConfig",
    "configure_logging",
]
