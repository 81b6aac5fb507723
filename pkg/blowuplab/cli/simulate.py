"""CLI command running a single simulation with snapshots."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_simulate
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written


def simulate(
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
    Evolve one ε until blowup or the horizon and store snapshots.

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
        record = run_simulate(config, out_dir, stride=stride)
    except COMMAND_ERRORS as exc:
        fail(exc)

    if record.t_num is None:
        typer.secho(f"No blowup up to t={record.t_horizon:g}.", fg=typer.colors.YELLOW)
    else:
        typer.secho(f"Blowup detected at t={record.t_num:.6g}.", fg=typer.colors.GREEN)
    report_written(out_dir / "simulate")
