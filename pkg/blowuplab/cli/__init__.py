"""CLI app for blowuplab commands."""

from __future__ import annotations

import typer

from blowuplab.cli.diagnose import diagnose
from blowuplab.cli.fit import fit
from blowuplab.cli.simulate import simulate
from blowuplab.cli.specfun_verify import specfun_verify
from blowuplab.cli.sweep import sweep
from blowuplab.cli.testfam_table import testfam_table
from blowuplab.logs import configure_logging

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Numerical experiments on small-data blowup of exterior semilinear waves.",
)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
) -> None:
    """
    Configure logging before any command runs.

    :param verbose: Enable debug logging.
    :type verbose: bool
    :return: None.
    :rtype: None
    """
    configure_logging(verbose)


app.command(name="specfun-verify")(specfun_verify)
app.command(name="testfam-table")(testfam_table)
app.command()(simulate)
app.command()(sweep)
app.command()(fit)
app.command()(diagnose)
