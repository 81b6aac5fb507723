"""Logging setup for the blowuplab CLI."""

from __future__ import annotations

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "blowuplab"


def configure_logging(verbose: bool = False) -> logging.Logger:
    """
    Attach a single rich handler to the package logger.

    Calling it again replaces the handler, so repeated CLI invocations in one
    process do not duplicate output.

    :param verbose: Log at DEBUG instead of INFO.
    :type verbose: bool
    :return: The package logger.
    :rtype: logging.Logger
    """
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
        log_time_format="[%X]",
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False
    return logger
