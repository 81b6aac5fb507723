"""Loader for sweep CSV files written by the ``sweep`` command."""

from __future__ import annotations

import csv
from pathlib import Path

from blowuplab.schema.records import LifespanRecord

SWEEP_COLUMNS = (
    "epsilon",
    "t_num",
    "t_num_refined",
    "converged",
    "dr",
    "dt",
    "threshold",
    "t_horizon",
    "dim_n",
    "p_exponent",
    "error",
)
OPTIONAL_COLUMNS = ("t_num_refined", "error")
_HORIZON_MARKERS = ("", "horizon", "none")


class SweepLoadError(Exception):
    """Raised when a sweep CSV cannot be read or validated."""


def _optional_float(text: str) -> float | None:
    if text.strip().lower() in _HORIZON_MARKERS:
        return None
    return float(text)


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_row(row: dict[str, str]) -> LifespanRecord:
    return LifespanRecord(
        epsilon=float(row["epsilon"]),
        t_num=_optional_float(row["t_num"]),
        t_num_refined=_optional_float(row.get("t_num_refined") or ""),
        converged=_parse_bool(row["converged"]),
        dr=float(row["dr"]),
        dt=float(row["dt"]),
        threshold=float(row["threshold"]),
        t_horizon=float(row["t_horizon"]),
        dim_n=int(row["dim_n"]),
        p_exponent=float(row["p_exponent"]),
        error=row.get("error") or None,
    )


def load_sweep(sweep_path: str | Path) -> list[LifespanRecord]:
    """
    Load lifespan records from a sweep CSV.

    :param sweep_path: Path to a ``sweep.csv`` file.
    :type sweep_path: str | pathlib.Path
    :return: Records in file order.
    :rtype: list[blowuplab.schema.records.LifespanRecord]
    :raises SweepLoadError: If the file is missing, lacks columns or has invalid rows.
    """
    sweep_path = Path(sweep_path)
    if not sweep_path.exists():
        raise SweepLoadError(f"Sweep file not found: {sweep_path}")

    try:
        with sweep_path.open("r", encoding="utf-8", newline="") as file:
            reader = csv.DictReader(file)
            header = reader.fieldnames or []
            missing = [c for c in SWEEP_COLUMNS if c not in header and c not in OPTIONAL_COLUMNS]
            if missing:
                raise SweepLoadError(f"Sweep file {sweep_path} lacks columns: {missing}")
            rows = list(reader)
    except SweepLoadError:
        raise
    except Exception as exc:
        raise SweepLoadError(f"Failed to read sweep file '{sweep_path}': {exc}") from exc

    records = []
    for line, row in enumerate(rows, start=2):
        try:
            records.append(_parse_row(row))
        except Exception as exc:
            raise SweepLoadError(f"{sweep_path}:{line}: invalid sweep row: {exc}") from exc
    return records
