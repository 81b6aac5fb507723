"""CLI command computing functionals and probes along a simulation."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_diagnose
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written


def diagnose(
    config_path: Path = typer.Option(
        ...,
        "--config",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Run config (JSON) with geometry, data and solver sections.",
    ),
    out: Path | None = typer.Option(None, "--out", help="Output directory for run files."),
    stride: int | None = typer.Option(
        None, "--stride", min=1, help="Keep every k-th time level (overrides config)."
    ),
) -> None:
    """
    Simulate with history and write functional traces and scaling probes.

    :param config_path: Run config path.
    :type config_path: pathlib.Path
    :param out: Optional output directory.
    :type out: pathlib.Path | None
    :param stride: Optional snapshot stride.
    :type stride: int | None
    :return: None.
    :rtype: None
    """
    try:
        config, out_dir = load_config_and_out(config_path, out)
        run_diagnose(config, out_dir, stride=stride)
    except COMMAND_ERRORS as exc:
        fail(exc)

    typer.secho("Diagnostics complete.", fg=typer.colors.GREEN)
    report_written(out_dir / "diagnose")
