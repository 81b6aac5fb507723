"""CLI command tabulating the test-function family."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_testfam_table
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written


def testfam_table(
    config_path: Path | None = typer.Option(
        None,
        "--config",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Run config (JSON). Defaults apply when omitted.",
    ),
    out: Path | None = typer.Option(None, "--out", help="Output directory for run files."),
) -> None:
    """
    Write Φ_β, its bounds and the light-cone identity residual on a grid.

    :param config_path: Optional run config path.
    :type config_path: pathlib.Path | None
    :param out: Optional output directory.
    :type out: pathlib.Path | None
    :return: None.
    :rtype: None
    """
    try:
        config, out_dir = load_config_and_out(config_path, out)
        table = run_testfam_table(config, out_dir)
    except COMMAND_ERRORS as exc:
        fail(exc)

    typer.secho(f"All {len(table.rows)} rows pass.", fg=typer.colors.GREEN)
    report_written(out_dir / "testfam-table")
