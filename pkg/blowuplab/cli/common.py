"""Error reporting and exit codes shared by the CLI commands."""

from __future__ import annotations

from pathlib import Path
from typing import NoReturn

import typer

from blowuplab.app.pipeline import AcceptanceFailure, HorizonExhausted
from blowuplab.artifacts.writer import ArtifactWriteError
from blowuplab.config.models import RunConfig
from blowuplab.config.store import ConfigStoreError, load_run_config, resolve_output_dir
from blowuplab.lifespan.fit import InsufficientDataError
from blowuplab.loaders.sweep_loader import SweepLoadError
from blowuplab.specfun.base import AccuracyError
from blowuplab.testfam.family import TShiftSearchError
from blowuplab.validators.report import SuiteFailure

EXIT_CONFIG = 2
EXIT_ACCEPTANCE = 3
EXIT_EXHAUSTED = 4

EXHAUSTION_ERRORS: tuple[type[BaseException], ...] = (
    TShiftSearchError,
    AccuracyError,
    HorizonExhausted,
    ArtifactWriteError,
    MemoryError,
)
ACCEPTANCE_ERRORS: tuple[type[BaseException], ...] = (
    SuiteFailure,
    AcceptanceFailure,
    InsufficientDataError,
)
CONFIG_ERRORS: tuple[type[BaseException], ...] = (ConfigStoreError, SweepLoadError, ValueError)

COMMAND_ERRORS = EXHAUSTION_ERRORS + ACCEPTANCE_ERRORS + CONFIG_ERRORS


def exit_code_for(exc: BaseException) -> int:
    """
    Map an error to the CLI exit code.

    Exhaustion is tested first: several of those errors are also ``ValueError``.

    :param exc: Raised error.
    :type exc: BaseException
    :return: 4 for exhaustion, 3 for acceptance failures, 2 otherwise.
    :rtype: int
    """
    if isinstance(exc, EXHAUSTION_ERRORS):
        return EXIT_EXHAUSTED
    if isinstance(exc, ACCEPTANCE_ERRORS):
        return EXIT_ACCEPTANCE
    return EXIT_CONFIG


def _print_error(exc: BaseException) -> None:
    """
    Print a user-facing error message on stderr.

    :param exc: Exception to display.
    :type exc: BaseException
    :return: None.
    :rtype: None
    """
    if isinstance(exc, SuiteFailure):
        typer.secho(f"{exc.suite} verification failed:", fg=typer.colors.RED, err=True)
        for error in exc.errors:
            typer.secho(f"- {error.message}", fg=typer.colors.RED, err=True)
        return
    if isinstance(exc, AcceptanceFailure):
        typer.secho(f"{exc.command} acceptance checks failed:", fg=typer.colors.RED, err=True)
        for error in exc.errors:
            typer.secho(f"- {error.message}", fg=typer.colors.RED, err=True)
        return
    typer.secho(f"Error: {exc}", fg=typer.colors.RED, err=True)


def fail(exc: BaseException) -> NoReturn:
    """Report ``exc`` and leave with its exit code."""
    _print_error(exc)
    raise typer.Exit(code=exit_code_for(exc))


def load_config_and_out(config_path: Path | None, out: Path | None) -> tuple[RunConfig, Path]:
    """
    Load the run config and resolve the output directory.

    :raises ConfigStoreError: If the config cannot be loaded.
    """
    config = load_run_config(config_path)
    return config, resolve_output_dir(out, config)


def report_written(run_dir: Path) -> None:
    typer.secho(f"Run written to: {run_dir}", fg=typer.colors.GREEN)
