"""CLI command fitting lifespans from sweep files."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_fit
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written
from blowuplab.schema.records import ScalingFit


def fit(
    sweeps: list[Path] = typer.Option(
        ...,
        "--sweep",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Sweep CSV written by the sweep command; repeat for several files.",
    ),
    config_path: Path | None = typer.Option(
        None,
        "--config",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Run config (JSON), echoed into the manifest.",
    ),
    out: Path | None = typer.Option(None, "--out", help="Output directory for run files."),
) -> None:
    """
    Fit ln T against ln ε, or tabulate the trend at the critical power.

    :param sweeps: Sweep CSV paths.
    :type sweeps: list[pathlib.Path]
    :param config_path: Optional run config path.
    :type config_path: pathlib.Path | None
    :param out: Optional output directory.
    :type out: pathlib.Path | None
    :return: None.
    :rtype: None
    """
    try:
        config, out_dir = load_config_and_out(config_path, out)
        result = run_fit(config, out_dir, sweeps)
    except COMMAND_ERRORS as exc:
        fail(exc)

    if isinstance(result, ScalingFit):
        typer.secho(
            f"Slope {result.slope:.4f} (predicted {result.predicted_slope:.4f}).",
            fg=typer.colors.GREEN,
        )
    else:
        typer.secho(f"Critical trend monotone: {result['monotone']}.", fg=typer.colors.GREEN)
    report_written(out_dir / "fit")
