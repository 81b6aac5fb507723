"""CLI command running the special-function verification suite."""

from __future__ import annotations

from pathlib import Path

import typer

from blowuplab.app.pipeline import run_specfun_verify
from blowuplab.cli.common import COMMAND_ERRORS, fail, load_config_and_out, report_written


def specfun_verify(
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
    Check Bessel, Gamma and hypergeometric identities on the configured grid.

    :param config_path: Optional run config path.
    :type config_path: pathlib.Path | None
    :param out: Optional output directory.
    :type out: pathlib.Path | None
    :return: None.
    :rtype: None
    """
    try:
        config, out_dir = load_config_and_out(config_path, out)
        report = run_specfun_verify(config, out_dir)
    except COMMAND_ERRORS as exc:
        fail(exc)

    typer.secho(f"All {len(report.checks)} identities within tolerance.", fg=typer.colors.GREEN)
    report_written(out_dir / "specfun-verify")
