from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from blowuplab.app.pipeline import (
    AcceptanceFailure,
    PositivityRefusal,
    build_initial_data,
    data_digest,
    ensure_positivity,
    g_monotone_failures,
    prepare_simulation,
    run_fit,
    run_simulate,
)
from blowuplab.config.models import DataSpec, MissingSectionError, ProfileKind, RunConfig
from blowuplab.config.store import load_run_config
from blowuplab.lifespan import InsufficientDataError
from blowuplab.loaders.sweep_loader import SWEEP_COLUMNS
from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.schema.records import FunctionalTrace
from blowuplab.wavesim import OutgoingPulse, ZeroProfile


def _write_sweep(path: Path, rows: list[tuple[float, float, float]], p: float = 2.0) -> Path:
    """Rows of (epsilon, t_num, threshold) for N = 3, all converged."""
    lines = [",".join(SWEEP_COLUMNS)]
    for epsilon, t_num, threshold in rows:
        lines.append(f"{epsilon},{t_num},{t_num},true,0.05,0.0225,{threshold},1000,3,{p},")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_build_initial_data_kinds(geom3: ExteriorGeometry) -> None:
    bump = build_initial_data(DataSpec(amplitude_f=0.0, amplitude_g=2.0), geom3, 0.5)
    assert isinstance(bump.f_profile, ZeroProfile)
    assert bump.g_profile.amplitude == 2.0
    assert bump.epsilon == 0.5

    pulse = build_initial_data(DataSpec(kind=ProfileKind.OUTGOING_PULSE), geom3, 1.0)
    assert isinstance(pulse.f_profile, OutgoingPulse)
    assert pulse.g_profile.component == "g"


def test_ensure_positivity_refuses_balanced_dipole(geom3: ExteriorGeometry) -> None:
    dipole = build_initial_data(DataSpec(kind=ProfileKind.DIPOLE), geom3, 1.0)
    with pytest.raises(PositivityRefusal, match="positivity assumption"):
        ensure_positivity(dipole, geom3, required=True)
    assert abs(ensure_positivity(dipole, geom3, required=False)) < 1e-10


def test_prepare_simulation_refuses_before_creating_directories(
    tmp_path: Path, run_dipole_path: Path
) -> None:
    config = load_run_config(run_dipole_path)
    with pytest.raises(PositivityRefusal):
        run_simulate(config, tmp_path / "out")
    assert not (tmp_path / "out").exists()


def test_prepare_simulation_needs_sections() -> None:
    with pytest.raises(MissingSectionError, match="geometry"):
        prepare_simulation(RunConfig())


def test_prepare_simulation_sizes_grid(run_small_path: Path) -> None:
    setup = prepare_simulation(load_run_config(run_small_path))
    assert setup.grid.dr == 0.1
    assert setup.grid.r_max >= 2.5 + 4.0 / 0.45
    assert setup.positivity > 0.0
    assert setup.data.epsilon == 10.0


def test_data_digest_tracks_epsilon(run_small_path: Path) -> None:
    setup = prepare_simulation(load_run_config(run_small_path))
    digest = data_digest(setup.data, setup.grid)
    assert digest == data_digest(setup.data, setup.grid)
    assert digest != data_digest(setup.data.with_epsilon(5.0), setup.grid)


def test_g_monotone_failures_uses_relative_slack() -> None:
    steady = FunctionalTrace(name="G", times=[0.0, 1.0, 2.0], values=[1e9, 1e9 - 1.0, 2e9])
    assert g_monotone_failures(steady) == []
    broken = FunctionalTrace(name="G", times=[0.0, 1.0, 2.0], values=[1.0, 0.5, 2.0])
    (failure,) = g_monotone_failures(broken)
    assert "t=1" in failure.message


def test_run_simulate_is_deterministic(tmp_path: Path, run_small_path: Path) -> None:
    config = load_run_config(run_small_path)
    first = run_simulate(config, tmp_path / "a")
    second = run_simulate(config, tmp_path / "b")
    assert first == second
    snapshots_a = (tmp_path / "a" / "simulate" / "snapshots.csv").read_bytes()
    snapshots_b = (tmp_path / "b" / "simulate" / "snapshots.csv").read_bytes()
    assert snapshots_a == snapshots_b

    run = json.loads((tmp_path / "a" / "simulate" / "run.json").read_text(encoding="utf-8"))
    assert run["stride"] == 2
    assert run["data"]["epsilon"] == 10.0
    assert run["g_monotone"]["violations"] == 0
    header, first_row = snapshots_a.decode("utf-8").splitlines()[:2]
    assert header == "t,r,u"
    assert first_row.startswith("0,1,")


def test_run_fit_reports_slope(tmp_path: Path, sweep_valid_path: Path) -> None:
    fit = run_fit(RunConfig(), tmp_path, [sweep_valid_path])
    assert fit.slope == pytest.approx(-2.0)
    payload = json.loads((tmp_path / "fit" / "fit.json").read_text(encoding="utf-8"))
    assert payload["critical"] is False
    assert payload["relative_deviation"] == pytest.approx(0.0, abs=1e-9)


def test_run_fit_flags_slope_outside_tolerance(tmp_path: Path) -> None:
    sweep = _write_sweep(
        tmp_path / "sweep.csv",
        [(eps, eps**-3.0, 1e6) for eps in (0.4, 0.2, 0.1)],
    )
    with pytest.raises(AcceptanceFailure) as exc:
        run_fit(RunConfig(), tmp_path, [sweep])
    assert "deviates" in exc.value.errors[0].message
    assert (tmp_path / "fit" / "fit.json").exists()


def test_run_fit_compares_thresholds(tmp_path: Path) -> None:
    high = _write_sweep(tmp_path / "high.csv", [(e, e**-2.0, 1e6) for e in (0.4, 0.2, 0.1)])
    close = _write_sweep(tmp_path / "close.csv", [(e, 2 * e**-2.0, 1e4) for e in (0.4, 0.2, 0.1)])
    run_fit(RunConfig(), tmp_path / "ok", [high, close])
    payload = json.loads((tmp_path / "ok" / "fit" / "fit.json").read_text(encoding="utf-8"))
    assert payload["threshold"] == 1e6
    assert payload["threshold_robustness"]["relative_difference"] == pytest.approx(0.0, abs=1e-9)

    far = _write_sweep(tmp_path / "far.csv", [(e, e**-2.5, 1e4) for e in (0.4, 0.2, 0.1)])
    with pytest.raises(AcceptanceFailure) as exc:
        run_fit(RunConfig(), tmp_path / "bad", [high, far])
    assert "thresholds" in exc.value.errors[0].message


def test_run_fit_critical_trend(tmp_path: Path, sweep_critical_path: Path) -> None:
    payload = run_fit(RunConfig(), tmp_path, [sweep_critical_path])
    assert payload["critical"] is True
    assert payload["monotone"] is True
    assert [row["epsilon"] for row in payload["rows"]] == [0.5, 0.45, 0.4]
    assert np.isclose(payload["rows"][0]["scaled"], 4.0)


def test_run_fit_rejects_mixed_problems(tmp_path: Path, sweep_valid_path: Path) -> None:
    other = _write_sweep(tmp_path / "other.csv", [(0.3, 50.0, 1e6)], p=1.8)
    with pytest.raises(ValueError, match="mix"):
        run_fit(RunConfig(), tmp_path, [sweep_valid_path, other])


def test_run_fit_needs_records(tmp_path: Path) -> None:
    empty = _write_sweep(tmp_path / "empty.csv", [])
    with pytest.raises(InsufficientDataError):
        run_fit(RunConfig(), tmp_path, [empty])
