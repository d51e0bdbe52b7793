"""Command-line entry point: mipt-qfi <experiment> --config FILE [--out DIR].

Exit codes: 0 success, 2 invalid config, 3 a cross-check exceeded its
tolerance, 4 numerical fault.  MIPT_QFI_THREADS overrides --threads.
"""

from __future__ import annotations

import os
import sys

import click

from .errors import ConfigError, NumericalFault, ToleranceFailure
from .experiments import EXPERIMENTS, load_config, run_experiment

EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_NUMERICAL = 4


def _resolve_threads(flag_value: int) -> int:
    env = os.environ.get("MIPT_QFI_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"MIPT_QFI_THREADS must be an integer, got {env!r}")
    return max(1, flag_value)


def _execute(experiment: str, config_path: str, out: str | None, threads: int) -> None:
    try:
        config = load_config(config_path)
        declared = config.get("experiment")
        if declared is None:
            config["experiment"] = experiment
        elif declared != experiment:
            raise ConfigError(
                f"config declares experiment {declared!r} but the "
                f"{experiment!r} subcommand was invoked"
            )
        result = run_experiment(config, out_dir=out, threads=_resolve_threads(threads))
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except ToleranceFailure as exc:
        click.echo(f"tolerance failure: {exc}", err=True)
        sys.exit(EXIT_TOLERANCE)
    except NumericalFault as exc:
        click.echo(f"numerical fault: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    click.echo(f"wrote {result.csv_path} and {result.json_path}")


@click.group()
def main() -> None:
    """Monitored Ising chain QFI experiments."""


def _register(name: str) -> None:
    @main.command(name=name)
    @click.option("--config", "config_path", required=True, type=click.Path(), help="JSON config file")
    @click.option("--out", default=None, type=click.Path(), help="output directory")
    @click.option("--threads", default=1, show_default=True, help="worker threads for grid points")
    def _cmd(config_path: str, out: str | None, threads: int, _name: str = name) -> None:
        _execute(_name, config_path, out, threads)

    _cmd.__doc__ = f"Run the {name} experiment."


for _name in EXPERIMENTS:
    _register(_name)


if __name__ == "__main__":
    main()
