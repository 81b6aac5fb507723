"""
Single writer per run directory.

Every emitted file goes through :class:`RunWriter`, which records its
SHA-256 digest for ``manifest.json``. Reals are written with 17 significant
digits; JSON is indented and key-sorted.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from pydantic import BaseModel, Field

import blowuplab
from blowuplab.config.models import RunConfig

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class ArtifactWriteError(Exception):
    """Raised when a run file cannot be written."""


class ManifestEntry(BaseModel):
    path: str
    sha256: str
    size_bytes: int


class RunManifest(BaseModel):
    """Config echo, version, timestamps, outcome and file inventory of one run."""

    command: str
    version: str
    started_at: str
    finished_at: str | None = None
    config: dict[str, Any]
    outcome: dict[str, Any] = Field(default_factory=dict)
    error: str | None = None
    files: list[ManifestEntry] = Field(default_factory=list)


def format_value(value: Any) -> str:
    """CSV cell text: reals in ``.17g``, ``None`` empty, booleans lowercase."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunWriter:
    """
    Owns one run directory and its manifest.

    Use as a context manager; the manifest is written on exit, also when
    the body raises.

    :param run_dir: Target directory, created on entry.
    :type run_dir: pathlib.Path
    :param command: Command name recorded in the manifest.
    :type command: str
    :param config: Config echoed into the manifest.
    :type config: blowuplab.config.models.RunConfig
    """

    def __init__(self, run_dir: Path, command: str, config: RunConfig) -> None:
        self.run_dir = Path(run_dir)
        self.manifest = RunManifest(
            command=command,
            version=blowuplab.__version__,
            started_at=_utc_now(),
            config=config.model_dump(mode="json"),
        )

    def __enter__(self) -> RunWriter:
        try:
            self.run_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ArtifactWriteError(f"Cannot create run directory '{self.run_dir}': {exc}")
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc is not None:
            self.manifest.error = f"{type(exc).__name__}: {exc}"
        self.finalize()

    def _write_bytes(self, name: str, data: bytes) -> Path:
        path = self.run_dir / name
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
        except OSError as exc:
            raise ArtifactWriteError(f"Failed to write '{path}': {exc}") from exc
        self.manifest.files = [f for f in self.manifest.files if f.path != name]
        self.manifest.files.append(
            ManifestEntry(path=name, sha256=hashlib.sha256(data).hexdigest(), size_bytes=len(data))
        )
        logger.debug("wrote %s (%d bytes)", path, len(data))
        return path

    def write_csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        buffer = io.StringIO()
        out = csv.writer(buffer, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([format_value(v) for v in row])
        return self._write_bytes(name, buffer.getvalue().encode("utf-8"))

    def write_json(self, name: str, payload: Any) -> Path:
        return self._write_bytes(name, dumps_json(payload).encode("utf-8"))

    def set_outcome(self, outcome: Mapping[str, Any]) -> None:
        self.manifest.outcome = dict(outcome)

    def finalize(self) -> Path:
        """Write ``manifest.json`` listing every file written so far."""
        self.manifest.finished_at = _utc_now()
        text = dumps_json(self.manifest.model_dump(mode="json"))
        path = self.run_dir / MANIFEST_NAME
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ArtifactWriteError(f"Failed to write manifest '{path}': {exc}") from exc
        return path
