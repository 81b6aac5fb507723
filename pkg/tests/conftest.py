from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from blowuplab.schema.geometry import ExteriorGeometry  # noqa: E402


@pytest.fixture()
def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


@pytest.fixture()
def run_small_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "run_small.json"


@pytest.fixture()
def run_dipole_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "run_dipole.json"


@pytest.fixture()
def run_sweep_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "run_sweep.json"


@pytest.fixture()
def run_invalid_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "run_invalid.json"


@pytest.fixture()
def sweep_valid_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "sweep_valid.csv"


@pytest.fixture()
def sweep_critical_path(fixtures_dir: Path) -> Path:
    return fixtures_dir / "sweep_critical.csv"


@pytest.fixture()
def geom3() -> ExteriorGeometry:
    return ExteriorGeometry(dim_n=3, support_radius_r0=2.5)


@pytest.fixture()
def geom4() -> ExteriorGeometry:
    return ExteriorGeometry(dim_n=4, support_radius_r0=2.5)


@pytest.fixture(autouse=True)
def _no_output_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("BLOWUPLAB_OUT", raising=False)
