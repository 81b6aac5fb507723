"""Filesystem-backed config loading and output-directory resolution."""

from __future__ import annotations

import os
from pathlib import Path

import yaml

from blowuplab.config.models import DEFAULT_OUTPUT_DIR, RunConfig

OUTPUT_DIR_ENV_VAR = "BLOWUPLAB_OUT"


class ConfigStoreError(Exception):
    """Raised when a run config cannot be read, validated or written."""


def load_run_config(config_path: str | Path | None) -> RunConfig:
    """
    Load and validate a run config; ``None`` yields all defaults.

    The document is JSON; it is read with a YAML loader, which accepts it.

    :param config_path: Path to the config document.
    :type config_path: str | pathlib.Path | None
    :return: Validated config.
    :rtype: blowuplab.config.models.RunConfig
    :raises ConfigStoreError: If the file is missing, malformed or invalid.
    """
    if config_path is None:
        return RunConfig()

    path = Path(config_path).expanduser()
    if not path.exists():
        raise ConfigStoreError(f"Config file not found: {path}")

    try:
        with path.open("r", encoding="utf-8") as file:
            raw = yaml.safe_load(file)
    except Exception as exc:
        raise ConfigStoreError(f"Failed to read config file '{path}': {exc}") from exc

    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigStoreError(f"Config file must contain a mapping at top level: {path}")

    try:
        return RunConfig.model_validate(raw)
    except Exception as exc:
        raise ConfigStoreError(f"Config schema validation failed for '{path}': {exc}") from exc


def resolve_output_dir(cli_out: str | Path | None, config: RunConfig) -> Path:
    """
    Resolve the run output directory.

    Precedence:
    1) ``BLOWUPLAB_OUT`` environment variable
    2) ``--out`` flag
    3) ``output_dir`` of the config
    4) ``./runs``

    :param cli_out: Value of ``--out``.
    :type cli_out: str | pathlib.Path | None
    :param config: Loaded config.
    :type config: blowuplab.config.models.RunConfig
    :return: Output directory (not created).
    :rtype: pathlib.Path
    """
    from_env = os.getenv(OUTPUT_DIR_ENV_VAR)
    if from_env:
        return Path(from_env).expanduser()
    if cli_out is not None:
        return Path(cli_out).expanduser()
    if config.output_dir:
        return Path(config.output_dir).expanduser()
    return Path(DEFAULT_OUTPUT_DIR)


def save_run_config(config: RunConfig, path: str | Path) -> Path:
    """
    Persist a config as indented JSON.

    :raises ConfigStoreError: If writing fails.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    try:
        target.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except Exception as exc:
        raise ConfigStoreError(f"Failed to write config file '{target}': {exc}") from exc
    return target
