"""Package entrypoint for the blowuplab CLI."""

from __future__ import annotations

from blowuplab.cli import app

if __name__ == "__main__":
    app()
