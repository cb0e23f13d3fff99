"""Command line interface for fraclab.

Exit codes: 0 success, 1 fixture failure, 2 config error, 3 solver non-convergence.
"""

import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click

from .. import __version__
from ..config import ExperimentConfig, LoggingConfig, configure_logging
from ..errors import ConfigError, FracLabError
from .runners import (EXIT_CONFIG_ERROR, EXIT_FIXTURE_FAILURE, EXIT_OK, run_counterexample, run_eval,
                      run_probe, run_solve)
from .validation import run_validate

logger = logging.getLogger(__name__)


def _common_options(func: Callable) -> Callable:
    func = click.option("--threads", default=1, show_default=True, type=click.IntRange(min=1),
                        help="Worker threads for node sweeps")(func)
    func = click.option("--out", "out_dir", default="fraclab-out", show_default=True,
                        type=click.Path(file_okay=False), help="Output directory")(func)
    return func


def _load(config_path: Optional[str]) -> ExperimentConfig:
    config = ExperimentConfig.load_from_file(config_path) if config_path else ExperimentConfig()
    configure_logging(config.logging)
    return config


def _run(runner: Callable[[ExperimentConfig, str, int], int], config_path: Optional[str],
         out_dir: str, threads: int) -> None:
    try:
        config = _load(config_path)
        code = runner(config, out_dir, threads)
    except ConfigError as e:
        click.echo(str(e), err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    except FracLabError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    sys.exit(code)


@click.group()
@click.version_option(version=__version__, prog_name="fraclab")
def cli():
    """Numerical lab for degenerate fractional elliptic equations."""


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
              help="Experiment YAML")
@_common_options
def solve(config_path: str, out_dir: str, threads: int):
    """Vanishing-viscosity solve; writes solution.csv and report.txt."""
    _run(run_solve, config_path, out_dir, threads)


@cli.command(name="eval")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
              help="Experiment YAML")
@_common_options
def eval_command(config_path: str, out_dir: str, threads: int):
    """Apply an operator at every interior node; writes eval.csv."""
    _run(run_eval, config_path, out_dir, threads)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
              help="Experiment YAML")
@_common_options
def probe(config_path: str, out_dir: str, threads: int):
    """Regularity probe; writes scales.csv (flatness.csv) and report.txt."""
    _run(run_probe, config_path, out_dir, threads)


@cli.command()
@click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False),
              help="Experiment YAML (defaults apply when omitted)")
@_common_options
def counterexample(config_path: Optional[str], out_dir: str, threads: int):
    """Blow-up table of the odd kink; writes counterexample.csv and report.txt."""
    _run(run_counterexample, config_path, out_dir, threads)


@cli.command()
@click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False),
              help="Only the logging section is used")
@_common_options
@click.option("--h-factor", default=1.0, show_default=True, type=click.FloatRange(min=1.0),
              help="Coarsen the default grid spacing by this factor")
@click.option("--normalization-scale", default=1.0, show_default=True,
              type=click.FloatRange(min=0.0, min_open=True),
              help="Multiply C_sigma (fault injection)")
def validate(config_path: Optional[str], out_dir: str, threads: int, h_factor: float,
             normalization_scale: float):
    """Run the built-in fixture suite; exit 1 if any fixture fails."""
    try:
        if config_path:
            _load(config_path)
        else:
            configure_logging(LoggingConfig())
    except ConfigError as e:
        click.echo(str(e), err=True)
        sys.exit(EXIT_CONFIG_ERROR)

    results = run_validate(h_factor=h_factor, normalization_scale=normalization_scale, threads=threads)
    lines = [result.line() for result in results]
    for line in lines:
        click.echo(line)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "validate.txt", "w", newline="") as f:
        f.write("".join(f"{line}\n" for line in lines))
    sys.exit(EXIT_FIXTURE_FAILURE if any(result.failed for result in results) else EXIT_OK)


def main():
    cli()


if __name__ == "__main__":
    main()
