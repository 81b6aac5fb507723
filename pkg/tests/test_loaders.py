from __future__ import annotations

from pathlib import Path

import pytest

from blowuplab.loaders.sweep_loader import SweepLoadError, load_sweep


def test_load_sweep_valid(sweep_valid_path: Path) -> None:
    records = load_sweep(sweep_valid_path)

    assert [r.epsilon for r in records] == [0.4, 0.2, 0.1, 0.05]
    assert records[0].t_num == 25.0
    assert records[0].t_num_refined == 25.5
    assert records[0].converged
    assert records[-1].t_num is None
    assert records[-1].reached_horizon
    assert sum(r.usable for r in records) == 3


def test_load_sweep_missing_column(fixtures_dir: Path) -> None:
    with pytest.raises(SweepLoadError) as exc:
        load_sweep(fixtures_dir / "sweep_missing_column.csv")
    assert "p_exponent" in str(exc.value)


def test_load_sweep_missing_file(tmp_path: Path) -> None:
    with pytest.raises(SweepLoadError, match="not found"):
        load_sweep(tmp_path / "sweep.csv")


def test_load_sweep_invalid_row(tmp_path: Path, sweep_valid_path: Path) -> None:
    lines = sweep_valid_path.read_text(encoding="utf-8").splitlines()
    lines[1] = lines[1].replace("true", "maybe")
    broken = tmp_path / "sweep.csv"
    broken.write_text("\n".join(lines) + "\n", encoding="utf-8")

    with pytest.raises(SweepLoadError, match=":2:"):
        load_sweep(broken)


def test_load_sweep_horizon_marker(tmp_path: Path) -> None:
    path = tmp_path / "sweep.csv"
    path.write_text(
        "epsilon,t_num,converged,dr,dt,threshold,t_horizon,dim_n,p_exponent\n"
        "0.3,horizon,false,0.1,0.045,1e6,10,3,2\n",
        encoding="utf-8",
    )
    (record,) = load_sweep(path)
    assert record.t_num is None
    assert record.t_num_refined is None
    assert record.error is None
