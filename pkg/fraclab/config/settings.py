"""Configuration management for fraclab experiments."""

import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError
from ..grid import ExteriorExtension, Grid
from ..kernels import IsaacsOperator, KernelFamilyFactory
from ..operators import QuadratureScheme

LOG_LEVEL_ENV = "FRACLAB_LOG_LEVEL"


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class GridConfig(Section):
    """Truncated uniform grid."""
    R: float = Field(4.0, description="Truncation radius")
    h: float = Field(1.0 / 512.0, description="Grid spacing")

    @model_validator(mode="after")
    def validate_grid(self):
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if self.R < 2:
            raise ValueError(f"R must be at least 2, got {self.R}")
        ratio = self.R / self.h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"R/h must be an integer, got R={self.R}, h={self.h}")
        return self

    def build(self, h_factor: float = 1.0) -> Grid:
        return Grid(self.R, self.h * h_factor)


class KernelConfig(Section):
    """Kernel family and the m x n shape of the Isaacs operator."""
    family: str = Field("fraclap", description="Kernel family (fraclap, constant, band, perturbed)")
    sigma: float = Field(1.5, description="Order of the operator")
    lambda_lo: float = Field(1.0, alias="lambda", description="Lower ellipticity constant")
    lambda_hi: float = Field(1.0, alias="Lambda", description="Upper ellipticity constant")
    seed: int = Field(0, description="Base seed of the band family")
    value: Optional[float] = Field(None, description="Multiplier of the constant family")
    values: Optional[List[float]] = Field(None, description="Per-entry multipliers of the constant family")
    k: Optional[float] = Field(None, description="Limit multiplier of the perturbed family")
    k_values: Optional[List[float]] = Field(None, description="Per-entry limit multipliers")
    omega_exponent: float = Field(1.0, description="Exponent of the continuity modulus")
    amplitude: Optional[float] = Field(None, description="Amplitude of the perturbation")
    rows: int = Field(1, description="Isaacs rows (inf)")
    cols: int = Field(1, description="Isaacs columns (sup)")

    @field_validator("family")
    def validate_family(cls, v):
        allowed = KernelFamilyFactory.get_supported_families()
        if v.lower() not in allowed:
            raise ValueError(f"Family must be one of {allowed}")
        return v.lower()

    @field_validator("sigma")
    def validate_sigma(cls, v):
        if not 0.0 < v < 2.0:
            raise ValueError(f"sigma must lie in (0, 2), got {v}")
        return v

    @field_validator("rows", "cols")
    def validate_shape(cls, v):
        if v < 1:
            raise ValueError("Isaacs family needs at least one row and one column")
        return v

    @model_validator(mode="after")
    def validate_band(self):
        if not 0.0 < self.lambda_lo <= self.lambda_hi:
            raise ValueError(f"Need 0 < lambda <= Lambda, got ({self.lambda_lo}, {self.lambda_hi})")
        return self

    def params(self) -> Dict[str, Any]:
        params: Dict[str, Any] = {"lambda": self.lambda_lo, "Lambda": self.lambda_hi, "seed": self.seed,
                                  "omega_exponent": self.omega_exponent}
        for name in ("value", "values", "k", "k_values", "amplitude"):
            if getattr(self, name) is not None:
                params[name] = getattr(self, name)
        return params

    def build_operator(self) -> IsaacsOperator:
        return KernelFamilyFactory.create_operator(self.family, self.sigma, self.params(),
                                                   (self.rows, self.cols))


class ExteriorConfig(Section):
    """Exterior extension of the data beyond R (see ExteriorExtension)."""
    tag: Literal["zero", "constant", "affine", "power", "cosine"] = "zero"
    c: float = 0.0
    a: float = 0.0
    b: float = 0.0
    a_left: Optional[float] = None
    b_left: Optional[float] = None
    s: float = 0.0
    beta: float = 0.0
    amplitude: float = 1.0
    omega: float = 1.0
    phi: float = 0.0

    def build(self) -> ExteriorExtension:
        return ExteriorExtension.from_dict(self.model_dump())


class ProblemConfig(Section):
    """Equation data."""
    gamma: float = Field(0.0, description="Degeneracy exponent")
    shift_p: float = Field(0.0, description="Gradient shift p")
    rhs: float = Field(0.0, description="Constant right-hand side f")
    fixture: Optional[Literal["explicit"]] = Field(
        None, description="Use the explicit |x|^(1+beta) fixture (sets f and the exterior)")

    @field_validator("gamma")
    def validate_gamma(cls, v):
        if v < 0:
            raise ValueError(f"gamma must be nonnegative, got {v}")
        return v


def _default_schedule() -> List[float]:
    return [0.1 * 2.0 ** (-k) for k in range(6)]


class SolverConfig(Section):
    """Pseudo-time marching and the epsilon schedule."""
    epsilon_schedule: List[float] = Field(default_factory=_default_schedule)
    cfl_factor: float = 0.5
    tol_residual: float = 1e-6
    max_iters: int = 200_000
    log_every: int = 5_000

    @field_validator("epsilon_schedule")
    def validate_schedule(cls, v):
        if not v:
            raise ValueError("epsilon_schedule must not be empty")
        if any(e <= 0 for e in v):
            raise ValueError("epsilon_schedule entries must be positive")
        if any(b >= a for a, b in zip(v[:-1], v[1:])):
            raise ValueError("epsilon_schedule must be strictly decreasing")
        return v

    @field_validator("cfl_factor")
    def validate_cfl(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError(f"cfl_factor must lie in (0, 1), got {v}")
        return v

    @field_validator("tol_residual")
    def validate_tol(cls, v):
        if v <= 0:
            raise ValueError("tol_residual must be positive")
        return v

    @field_validator("max_iters", "log_every")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be a positive integer")
        return v


class QuadratureConfig(Section):
    delta_inner: Optional[float] = Field(None, description="Inner cutoff (defaults to h)")
    tail_tol: float = Field(1e-10, description="Adaptive tail tolerance")
    normalization_scale: float = Field(1.0, description="Multiplier on C_sigma (fault injection)")

    @field_validator("delta_inner")
    def validate_delta(cls, v):
        if v is not None and not 0.0 < v <= 1.0:
            raise ValueError(f"delta_inner must lie in (0, 1], got {v}")
        return v

    @field_validator("tail_tol", "normalization_scale")
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    def build(self) -> QuadratureScheme:
        return QuadratureScheme(delta_inner=self.delta_inner, tail_tol=self.tail_tol,
                                normalization_scale=self.normalization_scale)


FUNCTIONS = Literal["file", "cosine", "gaussian", "odd_kink", "explicit", "power", "affine", "solve"]


class EvalConfig(Section):
    """Operator applied across interior nodes."""
    operator: Literal["linear", "isaacs", "pucci_plus", "pucci_minus", "local_limit",
                      "frac_p_laplacian"] = "linear"
    function: FUNCTIONS = "cosine"
    input: Optional[str] = Field(None, description="CSV written by write_grid_function")
    exponent: float = Field(0.5, description="Exponent of the power function |x|^exponent")
    slope: float = Field(1.0, description="Slope of the affine function")
    p_exp: float = Field(3.0, description="p of the fractional p-Laplacian")
    r_p: float = Field(0.0, description="Normalizing constant of the p-Laplacian jump")
    radius: Optional[float] = Field(None, description="Evaluate on |x| <= radius (defaults to R - 1)")

    @model_validator(mode="after")
    def validate_input(self):
        if self.function == "file" and not self.input:
            raise ValueError("function 'file' needs input")
        if self.operator == "frac_p_laplacian" and self.p_exp <= 2:
            raise ValueError(f"p_exp must exceed 2, got {self.p_exp}")
        if self.r_p < 0:
            raise ValueError("r_p must be nonnegative")
        return self


class ProbeConfig(Section):
    """Regularity measurements of one function."""
    function: FUNCTIONS = "power"
    input: Optional[str] = None
    exponent: float = 0.5
    slope: float = 1.0
    center: float = 0.0
    scales: List[float] = Field(default_factory=lambda: [0.4, 0.2, 0.1, 0.05])
    rho: float = 0.5
    depth: int = 5
    alpha: float = 0.4
    alpha_bar: float = 1.0
    C_bound: float = 1.0
    flatness: bool = False
    normalize: bool = Field(False, description="Rescale u to sup norm <= 1 before the flatness trace")
    eta: float = 1.0
    rhs_sup: Optional[float] = Field(None, description="|f|_inf for normalize; defaults to |problem.rhs|")

    @field_validator("rho")
    def validate_rho(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {v}")
        return v

    @field_validator("scales")
    def validate_scales(cls, v):
        if len(v) < 3:
            raise ValueError("need at least 3 scales")
        if any(b >= a for a, b in zip(v[:-1], v[1:])):
            raise ValueError("scales must be strictly decreasing")
        return v

    @field_validator("alpha")
    def validate_alpha(cls, v):
        if not 0.0 < v <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {v}")
        return v

    @field_validator("eta")
    def validate_eta(cls, v):
        if v <= 0:
            raise ValueError(f"eta must be positive, got {v}")
        return v


class CounterexampleConfig(Section):
    """Blow-up of the operator on the odd kink near +-1."""
    dists: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])

    @field_validator("dists")
    def validate_dists(cls, v):
        if len(v) < 2 or any(not 0.0 < d < 1.0 for d in v):
            raise ValueError("need at least two distances in (0, 1)")
        return v


class LoggingConfig(Section):
    """Logging configuration."""
    level: str = Field("INFO", description="Logging level")
    format: str = Field(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format"
    )
    file_path: Optional[str] = Field(None, description="Log file path")

    @field_validator("level")
    def validate_level(cls, v):
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"Level must be one of {allowed}")
        return v.upper()


class ExperimentConfig(Section):
    """Main experiment configuration."""
    grid: GridConfig = Field(default_factory=GridConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    exterior: ExteriorConfig = Field(default_factory=ExteriorConfig)
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    probe: ProbeConfig = Field(default_factory=ProbeConfig)
    counterexample: CounterexampleConfig = Field(default_factory=CounterexampleConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @model_validator(mode="after")
    def validate_exterior(self):
        try:
            self.exterior.build().check_l1_sigma(self.kernel.sigma)
        except ValueError as e:
            raise ValueError(f"exterior: {e}")
        return self

    @classmethod
    def load_from_file(cls, config_path: str) -> "ExperimentConfig":
        """Load configuration from YAML file; errors carry the offending line."""
        config_file = Path(config_path)
        if not config_file.exists():
            raise ConfigError("configuration file not found", path=str(config_path))

        text = config_file.read_text()
        try:
            root = yaml.compose(text)
            config_data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigError(f"YAML syntax error: {getattr(e, 'problem', e)}", str(config_path), line)
        if not isinstance(config_data, dict):
            raise ConfigError("top level must be a mapping of sections", str(config_path), 1)

        try:
            return cls.model_validate(config_data)
        except ValidationError as e:
            error = e.errors()[0]
            location = tuple(str(part) for part in error["loc"])
            if not location and "exterior:" in error["msg"]:
                location = ("exterior", "tag")
            line = _line_of(_key_lines(root), location)
            field = ".".join(location) or "config"
            raise ConfigError(f"{field}: {error['msg']}", str(config_path), line)

    def save_to_file(self, config_path: str) -> None:
        """Save configuration to YAML file."""
        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, "w") as f:
            yaml.safe_dump(self.resolved(), f, default_flow_style=False, indent=2, sort_keys=False)

    def resolved(self) -> Dict[str, Any]:
        """Fully resolved configuration, keyed as in the YAML file."""
        return self.model_dump(mode="json", by_alias=True)

    def build_grid(self, h_factor: float = 1.0) -> Grid:
        return self.grid.build(h_factor)


def _key_lines(node, prefix: Tuple[str, ...] = ()) -> Dict[Tuple[str, ...], int]:
    """Map key paths of a composed YAML tree to 1-based line numbers."""
    lines: Dict[Tuple[str, ...], int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (str(key_node.value),)
            lines[path] = key_node.start_mark.line + 1
            lines.update(_key_lines(value_node, path))
    return lines


def _line_of(lines: Dict[Tuple[str, ...], int], location: Tuple[str, ...]) -> Optional[int]:
    """Line of the deepest key along ``location`` present in the file."""
    for end in range(len(location), 0, -1):
        if location[:end] in lines:
            return lines[location[:end]]
    return None


def configure_logging(config: Optional[LoggingConfig] = None) -> None:
    """Install stderr (and optional file) handlers on the fraclab logger."""
    config = config or LoggingConfig()
    level = os.environ.get(LOG_LEVEL_ENV, config.level).upper()
    logger = logging.getLogger("fraclab")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    formatter = logging.Formatter(config.format)
    stream = logging.StreamHandler(sys.stderr)
    stream.setFormatter(formatter)
    logger.addHandler(stream)
    if config.file_path:
        Path(config.file_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(config.file_path)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    logger.setLevel(getattr(logging, level, logging.INFO))
    logger.propagate = False
