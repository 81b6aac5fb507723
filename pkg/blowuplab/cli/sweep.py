"""CLI command sweeping the data amplitude ε."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_sweep
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written


def sweep(
    config_path: Path = typer.Option(
        ...,
        "--config",
        exists=True,
        dir_okay=False,
        readable=True,
        help="Run config (JSON) with geometry, data (epsilons) and solver sections.",
    ),
    out: Path | None = typer.Option(None, "--out", help="Output directory for run files."),
    jobs: int | None = typer.Option(
        None, "--jobs", min=1, help="Worker processes (default: config, then CPU count)."
    ),
) -> None:
    """
    Run every ε at dr and dr/2 and write one lifespan row per ε.

    :param config_path: Run config path.
    :type config_path: pathlib.Path
    :param out: Optional output directory.
    :type out: pathlib.Path | None
    :param jobs: Optional worker count.
    :type jobs: int | None
    :return: None.
    :rtype: None
    """
    try:
        config, out_dir = load_config_and_out(config_path, out)
        records = run_sweep(config, out_dir, jobs=jobs)
    except COMMAND_ERRORS as exc:
        fail(exc)

    blowups = sum(r.t_num is not None for r in records)
    typer.secho(f"{blowups} of {len(records)} runs blew up.", fg=typer.colors.GREEN)
    report_written(out_dir / "sweep")
