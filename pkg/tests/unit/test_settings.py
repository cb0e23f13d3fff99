"""Unit tests for YAML experiment configuration."""

import logging

import pytest
import yaml
from pydantic import ValidationError

from fraclab.config import (EvalConfig, ExperimentConfig, GridConfig, KernelConfig, LoggingConfig,
                            SolverConfig, configure_logging)
from fraclab.errors import ConfigError


def write_yaml(tmp_path, text, name="experiment.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestExperimentConfig:
    """Test configuration models."""

    def test_defaults(self):
        """Default experiment: fractional Laplacian of order 1.5 on R = 4."""
        config = ExperimentConfig()
        assert config.grid.R == 4.0
        assert config.grid.h == 1.0 / 512.0
        assert config.kernel.family == "fraclap"
        assert config.solver.epsilon_schedule[0] == 0.1
        assert len(config.solver.epsilon_schedule) == 6
        assert config.kernel.build_operator().shape == (1, 1)

    def test_from_dict(self, sample_config_data):
        """Sections validate into typed models."""
        config = ExperimentConfig(**sample_config_data)
        assert config.grid.build().size == 129
        assert config.solver.epsilon_schedule == [0.1, 0.05]
        assert config.logging.level == "WARNING"

    def test_ellipticity_aliases(self):
        """lambda and Lambda are accepted as written in YAML."""
        kernel = KernelConfig.model_validate({"family": "band", "sigma": 1.2, "lambda": 0.5, "Lambda": 2.0})
        assert kernel.lambda_lo == 0.5
        assert kernel.lambda_hi == 2.0
        assert kernel.params()["Lambda"] == 2.0

    def test_resolved_uses_aliases(self):
        """The resolved dump is keyed as the YAML file."""
        resolved = ExperimentConfig().resolved()
        assert set(resolved) == {"grid", "kernel", "exterior", "problem", "solver", "quadrature", "eval",
                                 "probe", "counterexample", "logging"}
        assert "lambda" in resolved["kernel"]
        assert "Lambda" in resolved["kernel"]

    def test_refined_grid(self):
        """h_factor refines the configured grid."""
        config = ExperimentConfig(grid={"R": 2.0, "h": 0.0625})
        assert config.build_grid(0.5).h == 0.03125

    @pytest.mark.parametrize("section,data", [
        (GridConfig, {"R": 2.0, "h": 0.3}),
        (GridConfig, {"R": 1.0, "h": 0.25}),
        (KernelConfig, {"sigma": 2.0}),
        (KernelConfig, {"family": "gaussian"}),
        (KernelConfig, {"lambda": 2.0, "Lambda": 1.0}),
        (SolverConfig, {"epsilon_schedule": [0.05, 0.1]}),
        (SolverConfig, {"cfl_factor": 1.5}),
        (EvalConfig, {"function": "file"}),
        (EvalConfig, {"operator": "frac_p_laplacian", "p_exp": 2.0}),
        (LoggingConfig, {"level": "LOUD"}),
    ])
    def test_invalid_sections(self, section, data):
        """Out-of-range values are rejected by the section models."""
        with pytest.raises(ValidationError):
            section.model_validate(data)

    def test_unknown_key(self):
        """Sections forbid unknown keys."""
        with pytest.raises(ValidationError):
            GridConfig.model_validate({"R": 2.0, "spacing": 0.1})


class TestLoadFromFile:
    """Test YAML loading and error anchoring."""

    def test_load(self, tmp_path, sample_config_data):
        """A valid file loads into the experiment model."""
        path = write_yaml(tmp_path, yaml.safe_dump(sample_config_data))
        config = ExperimentConfig.load_from_file(path)
        assert config.problem.rhs == 1.0
        assert config.kernel.sigma == 1.5

    def test_save_and_load(self, tmp_path, sample_config_data):
        """Saved configurations load back unchanged."""
        config = ExperimentConfig(**sample_config_data)
        path = tmp_path / "out" / "saved.yaml"
        config.save_to_file(str(path))
        assert ExperimentConfig.load_from_file(str(path)).resolved() == config.resolved()

    def test_missing_file(self, tmp_path):
        """Missing files are configuration errors."""
        with pytest.raises(ConfigError, match="not found"):
            ExperimentConfig.load_from_file(str(tmp_path / "missing.yaml"))

    def test_bad_value_has_line(self, tmp_path):
        """Validation errors point at the offending key."""
        path = write_yaml(tmp_path, "grid:\n  R: 2.0\n  h: 0.03125\nproblem:\n  gamma: -1.0\n")
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.load_from_file(path)
        assert excinfo.value.line == 5
        assert "problem.gamma" in excinfo.value.message
        assert str(excinfo.value).startswith(f"{path}:5: ")

    def test_unknown_key_has_line(self, tmp_path):
        """Unknown keys are reported where they appear."""
        path = write_yaml(tmp_path, "grid:\n  R: 2.0\n  spacing: 0.1\n")
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.load_from_file(path)
        assert excinfo.value.line == 3

    def test_divergent_exterior_anchored_to_tag(self, tmp_path):
        """Exterior growth beyond sigma is reported on the exterior tag."""
        text = "kernel:\n  sigma: 1.5\nexterior:\n  tag: power\n  s: 1.0\n  beta: 1.6\n"
        path = write_yaml(tmp_path, text)
        with pytest.raises(ConfigError, match="L1_sigma") as excinfo:
            ExperimentConfig.load_from_file(path)
        assert excinfo.value.line == 4

    def test_yaml_syntax_error(self, tmp_path):
        """Malformed YAML carries the parser position."""
        path = write_yaml(tmp_path, "grid:\n  R: [2.0\n  h: 0.1\n")
        with pytest.raises(ConfigError, match="YAML syntax error") as excinfo:
            ExperimentConfig.load_from_file(path)
        assert excinfo.value.line is not None

    def test_top_level_must_be_mapping(self, tmp_path):
        """A YAML list is not an experiment."""
        path = write_yaml(tmp_path, "- grid\n- kernel\n")
        with pytest.raises(ConfigError, match="mapping"):
            ExperimentConfig.load_from_file(path)


class TestConfigureLogging:
    """Test logger setup."""

    def test_level_and_handlers(self, monkeypatch):
        """One stderr handler at the configured level."""
        monkeypatch.delenv("FRACLAB_LOG_LEVEL", raising=False)
        configure_logging(LoggingConfig(level="WARNING"))
        logger = logging.getLogger("fraclab")
        assert logger.level == logging.WARNING
        assert len(logger.handlers) == 1
        assert not logger.propagate

    def test_environment_override(self, monkeypatch):
        """FRACLAB_LOG_LEVEL wins over the configured level."""
        monkeypatch.setenv("FRACLAB_LOG_LEVEL", "debug")
        configure_logging(LoggingConfig(level="ERROR"))
        assert logging.getLogger("fraclab").level == logging.DEBUG

    def test_file_handler(self, tmp_path, monkeypatch):
        """file_path adds a file handler and creates its directory."""
        monkeypatch.delenv("FRACLAB_LOG_LEVEL", raising=False)
        log_file = tmp_path / "logs" / "fraclab.log"
        configure_logging(LoggingConfig(level="INFO", file_path=str(log_file)))
        logging.getLogger("fraclab.solver").info("stage started")
        for handler in logging.getLogger("fraclab").handlers:
            handler.flush()
        assert "stage started" in log_file.read_text()

    def test_reconfigure_replaces_handlers(self):
        """Calling twice does not duplicate output."""
        configure_logging()
        configure_logging()
        assert len(logging.getLogger("fraclab").handlers) == 1
