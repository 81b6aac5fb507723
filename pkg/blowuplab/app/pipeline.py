"""Application pipeline orchestration for blowuplab commands."""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from blowuplab.artifacts.writer import RunWriter, format_value
from blowuplab.config.models import DataSpec, MissingSectionError, ProfileKind, RunConfig
from blowuplab.diagnostics.functionals import (
    MassWeight,
    concentration_mass,
    functional_f_beta,
    functional_g,
    tfm_residual,
    weighted_mass,
    y_aggregate,
)
from blowuplab.diagnostics.probes import (
    ScalingProbe,
    concentration_probe,
    volume_scaling_probe,
)
from blowuplab.lifespan.exponents import (
    NonCriticalExponentError,
    beta_critical,
    predicted_exponent,
)
from blowuplab.lifespan.fit import (
    InsufficientDataError,
    critical_trend,
    fit_subcritical,
    threshold_robustness,
)
from blowuplab.lifespan.sweep import SweepPlan, check_monotone, sweep
from blowuplab.loaders.sweep_loader import SWEEP_COLUMNS, load_sweep
from blowuplab.schema.geometry import ExteriorGeometry, TestFunctionParams
from blowuplab.schema.records import FunctionalTrace, LifespanRecord, ScalingFit
from blowuplab.schema.profiles import RadialProfile
from blowuplab.specfun.base import DomainError
from blowuplab.testfam.family import harmonic_pairing, select_t_shift
from blowuplab.testfam.table import PhiBetaTable
from blowuplab.validators.report import CheckFailure, SuiteReport
from blowuplab.validators.specfun_suite import SpecfunGrid, verify_specfun
from blowuplab.validators.testfam_suite import TestfamGrid, TestfamTable, build_testfam_table
from blowuplab.wavesim.data import (
    InitialData,
    OutgoingPulse,
    ZeroProfile,
    check_positivity,
    make_bump,
    make_dipole,
)
from blowuplab.wavesim.solver import (
    RadialGrid,
    SolutionHistory,
    SolverConfig,
    run_until_blowup,
)

logger = logging.getLogger(__name__)

FIT_TOLERANCE = 0.2
THRESHOLD_ROBUSTNESS_TOL = 0.05
G_MONOTONE_SLACK = 1e-8
POSITIVITY_RTOL = 1e-10


class PositivityRefusal(ValueError):
    """Raised when data with ∫ g U dx <= 0 are used for a blowup-claiming run."""


class AcceptanceFailure(ValueError):
    """Raised when a computed run breaks an acceptance check."""

    def __init__(self, command: str, errors: list[CheckFailure]) -> None:
        super().__init__(f"{command} acceptance checks failed.")
        self.command = command
        self.errors = errors


class HorizonExhausted(Exception):
    """Raised when no run of a sweep blew up within its horizon."""


@dataclass(frozen=True)
class _Magnitude:
    """|h| for a radial profile h."""

    profile: RadialProfile

    @property
    def support(self) -> tuple[float, float] | None:
        return self.profile.support

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        return np.abs(self.profile(np.asarray(r, dtype=float)))


@dataclass(frozen=True)
class SimulationSetup:
    """Validated inputs of one simulation."""

    geom: ExteriorGeometry
    data: InitialData
    grid: RadialGrid
    solver: SolverConfig
    positivity: float


@dataclass(frozen=True)
class SimulationOutcome:
    """One simulated run together with the objects it was built from."""

    geom: ExteriorGeometry
    data: InitialData
    grid: RadialGrid
    solver: SolverConfig
    record: LifespanRecord
    history: SolutionHistory
    positivity: float


def build_initial_data(spec: DataSpec, geom: ExteriorGeometry, epsilon: float) -> InitialData:
    """
    Turn a data spec into profiles (f, g) on the spec's support.

    ``bump`` scales one bump by ``amplitude_f`` and ``amplitude_g``; ``dipole``
    uses a balanced bump pair for g; ``outgoing_pulse`` uses a bump F of height
    ``amplitude_g`` for f = F/r and g = -F'/r.

    :param spec: Data section of the config.
    :type spec: blowuplab.config.models.DataSpec
    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param epsilon: Amplitude ε.
    :type epsilon: float
    :return: Initial data.
    :rtype: blowuplab.wavesim.data.InitialData
    :raises blowuplab.wavesim.data.InitialDataError: On an invalid support.
    """
    a, b = spec.support

    def _scaled(amplitude: float) -> RadialProfile:
        return make_bump(a, b, amplitude) if amplitude != 0.0 else ZeroProfile()

    if spec.kind is ProfileKind.DIPOLE:
        f_profile, g_profile = _scaled(spec.amplitude_f), make_dipole(a, b, spec.amplitude_g, geom)
    elif spec.kind is ProfileKind.OUTGOING_PULSE:
        pulse = make_bump(a, b, spec.amplitude_g)
        f_profile, g_profile = OutgoingPulse(pulse, "f"), OutgoingPulse(pulse, "g")
    else:
        f_profile, g_profile = _scaled(spec.amplitude_f), _scaled(spec.amplitude_g)
    return InitialData(f_profile, g_profile, epsilon, (a, b))


def ensure_positivity(data: InitialData, geom: ExteriorGeometry, *, required: bool) -> float:
    """
    Compute ∫ g U dx and refuse data that cannot blow up through it.

    Values within a relative 1e-10 of zero, compared with ∫ |g| U dx, count
    as zero.

    :raises PositivityRefusal: If ``required`` and the pairing is not positive.
    """
    pairing = check_positivity(data, geom)
    scale = harmonic_pairing(geom, _Magnitude(data.g_profile))
    if required and not pairing > POSITIVITY_RTOL * scale:
        raise PositivityRefusal(
            f"refusing a blowup run: the data violate the positivity assumption "
            f"∫ g U dx > 0 (got {pairing:.6g})"
        )
    return pairing


def _solver_config(config: RunConfig) -> SolverConfig:
    spec = config.solver
    return SolverConfig(
        p_exponent=spec.p_exponent,
        t_horizon=spec.t_horizon,
        cfl_factor=spec.cfl_factor,
        blowup_threshold=spec.blowup_threshold,
        nonlinear=spec.nonlinear,
    )


def _single_epsilon(config: RunConfig) -> float:
    spec = config.data
    if spec.epsilon is not None:
        return spec.epsilon
    if spec.epsilons:
        return spec.epsilons[0]
    raise MissingSectionError("config data needs 'epsilon' for a single run")


def data_digest(data: InitialData, grid: RadialGrid) -> str:
    """SHA-256 of (r, εf, εg) sampled on the grid in ``.17g`` text."""
    r = grid.r
    f = data.epsilon * np.asarray(data.f_profile(r), dtype=float)
    g = data.epsilon * np.asarray(data.g_profile(r), dtype=float)
    digest = hashlib.sha256()
    for row in zip(r, f, g):
        digest.update((",".join(format_value(float(v)) for v in row) + "\n").encode("utf-8"))
    return digest.hexdigest()


def prepare_simulation(config: RunConfig) -> SimulationSetup:
    """
    Validate the sections of a single run and build its data, solver and grid.

    Nothing is evolved here, so commands can refuse bad inputs before
    creating a run directory.

    :raises MissingSectionError: If geometry, data or solver sections are absent.
    :raises PositivityRefusal: If the data fail the positivity check.
    """
    config.require("geometry", "data", "solver")
    geom = config.geometry
    data = build_initial_data(config.data, geom, _single_epsilon(config))
    positivity = ensure_positivity(data, geom, required=config.data.require_positivity)
    solver = _solver_config(config)
    grid = RadialGrid.for_horizon(
        geom.support_radius_r0, solver.t_horizon, config.solver.dr, solver.cfl_factor, geom.dim_n
    )
    return SimulationSetup(geom, data, grid, solver, positivity)


def simulate_with_history(setup: SimulationSetup, *, stride: int) -> SimulationOutcome:
    """Run one prepared simulation, keeping every ``stride``-th level."""
    history = SolutionHistory(setup.grid, stride=stride)
    logger.info(
        "simulating N=%d p=%.6g eps=%.6g on %d nodes up to t=%.6g",
        setup.geom.dim_n,
        setup.solver.p_exponent,
        setup.data.epsilon,
        setup.grid.n_points,
        setup.solver.t_horizon,
    )
    record = run_until_blowup(setup.grid, setup.data, setup.solver, recorder=history)
    return SimulationOutcome(
        setup.geom, setup.data, setup.grid, setup.solver, record, history, setup.positivity
    )


def g_monotone_failures(trace: FunctionalTrace) -> list[CheckFailure]:
    """
    Steps where G decreases by more than 1e-8 · max(1, |G|).
    """
    failures = []
    values = trace.values
    for k in range(1, len(values)):
        slack = G_MONOTONE_SLACK * max(1.0, abs(values[k - 1]))
        if values[k] < values[k - 1] - slack:
            failures.append(
                CheckFailure(
                    f"G decreased from {values[k - 1]:.6e} to {values[k]:.6e} "
                    f"at t={trace.times[k]:.6g}"
                )
            )
    return failures


def _record_payload(record: LifespanRecord) -> dict[str, Any]:
    return record.model_dump(mode="json") | {"reached_horizon": record.reached_horizon}


def _g_checked(outcome: SimulationOutcome) -> bool:
    return outcome.positivity > 0.0 and outcome.record.t_num is not None


def run_specfun_verify(config: RunConfig, out_dir: Path) -> SuiteReport:
    """
    Run the special-function suite and write ``specfun_report.json``.

    :raises blowuplab.validators.report.SuiteFailure: If any identity breaks its tolerance.
    """
    spec = config.specfun_verify
    grid = SpecfunGrid(
        orders=tuple(spec.orders),
        z_values=tuple(spec.z_values),
        k_scale=1.0 + spec.k_perturbation,
    )
    with RunWriter(out_dir / "specfun-verify", "specfun-verify", config) as writer:
        report = verify_specfun(grid)
        writer.write_json("specfun_report.json", report.to_dict())
        writer.set_outcome({"passed": report.passed, "n_checks": len(report.checks)})
        report.raise_on_failure()
    return report


TESTFAM_COLUMNS = (
    "dim_n",
    "beta",
    "r",
    "t",
    "phi_beta",
    "lower_bound",
    "upper_shape",
    "identity_residual",
    "flag",
)


def run_testfam_table(config: RunConfig, out_dir: Path) -> TestfamTable:
    """
    Tabulate Φ_β with its bounds and write ``testfam_table.csv`` and ``testfam_report.json``.

    :raises blowuplab.validators.report.SuiteFailure: If a row breaks a bound or tolerance.
    """
    spec = config.testfam_table
    grid = TestfamGrid(
        dimensions=tuple(spec.dimensions),
        betas=tuple(spec.betas),
        radii=tuple(spec.radii),
        times=tuple(spec.times),
        quad_tolerance=config.testfam.quad_tolerance,
    )
    with RunWriter(out_dir / "testfam-table", "testfam-table", config) as writer:
        table = build_testfam_table(grid)
        writer.write_csv(
            "testfam_table.csv",
            TESTFAM_COLUMNS,
            ([getattr(row, c) for c in TESTFAM_COLUMNS] for row in table.rows),
        )
        writer.write_json("testfam_report.json", table.report.to_dict())
        writer.set_outcome({"passed": table.report.passed, "n_rows": len(table.rows)})
        table.report.raise_on_failure()
    return table


def run_simulate(config: RunConfig, out_dir: Path, *, stride: int | None = None) -> LifespanRecord:
    """
    One run with snapshots: ``snapshots.csv`` (t, r, u) and ``run.json``.

    Positive-g blowup runs also get the G monotonicity check.

    :raises PositivityRefusal: If the data fail the positivity check.
    :raises AcceptanceFailure: If G decreases beyond round-off.
    """
    setup = prepare_simulation(config)
    with RunWriter(out_dir / "simulate", "simulate", config) as writer:
        outcome = simulate_with_history(setup, stride=stride or config.stride)
        history, grid = outcome.history, outcome.grid
        radii = history.radii
        writer.write_csv(
            "snapshots.csv",
            ("t", "r", "u"),
            (
                (float(t), float(r), float(u))
                for t, row in zip(history.times, history.u)
                for r, u in zip(radii, row)
            ),
        )
        failures: list[CheckFailure] = []
        if _g_checked(outcome):
            g_trace, _ = functional_g(history, outcome.geom, outcome.solver.p_exponent)
            failures = g_monotone_failures(g_trace)
        payload = {
            "grid": {
                "dr": grid.dr,
                "n_points": grid.n_points,
                "dim_n": grid.dim_n,
                "r_max": grid.r_max,
            },
            "solver": asdict(outcome.solver),
            "data": {
                "kind": config.data.kind.value,
                "support": list(outcome.data.support),
                "epsilon": outcome.data.epsilon,
                "positivity": outcome.positivity,
                "sha256": data_digest(outcome.data, grid),
            },
            "stride": history.stride,
            "n_snapshots": len(history),
            "outcome": _record_payload(outcome.record),
            "g_monotone": {"checked": _g_checked(outcome), "violations": len(failures)},
        }
        writer.write_json("run.json", payload)
        writer.set_outcome(_record_payload(outcome.record))
        if failures:
            raise AcceptanceFailure("simulate", failures)
    return outcome.record


def run_sweep(
    config: RunConfig, out_dir: Path, *, jobs: int | None = None
) -> list[LifespanRecord]:
    """
    Sweep ε and write ``sweep.csv`` with one row per ε.

    :raises PositivityRefusal: If the data fail the positivity check.
    :raises HorizonExhausted: If no run blew up.
    """
    config.require("geometry", "data", "solver")
    spec = config.data
    epsilons = spec.epsilons or ([spec.epsilon] if spec.epsilon else None)
    if not epsilons:
        raise MissingSectionError("config data needs 'epsilons' for a sweep")
    geom = config.geometry
    data = build_initial_data(spec, geom, max(epsilons))
    ensure_positivity(data, geom, required=spec.require_positivity)
    plan = SweepPlan(geom=geom, data=data, config=_solver_config(config), dr=config.solver.dr)
    workers = jobs or config.jobs or os.cpu_count() or 1

    with RunWriter(out_dir / "sweep", "sweep", config) as writer:
        records = sweep(epsilons, plan, jobs=workers)
        writer.write_csv(
            "sweep.csv",
            SWEEP_COLUMNS,
            ([getattr(r, c) for c in SWEEP_COLUMNS] for r in records),
        )
        blowups = sum(r.t_num is not None for r in records)
        writer.set_outcome(
            {
                "n_runs": len(records),
                "n_blowups": blowups,
                "n_converged": sum(r.converged for r in records),
                "monotone": check_monotone(records),
            }
        )
        if blowups == 0:
            raise HorizonExhausted(
                f"none of {len(records)} runs blew up within its horizon; raise solver.t_horizon"
            )
    return records


def _is_critical(dim_n: int, p: float) -> bool:
    try:
        beta_critical(dim_n, p)
    except NonCriticalExponentError:
        return False
    return True


def run_fit(
    config: RunConfig, out_dir: Path, sweep_paths: Sequence[Path]
) -> ScalingFit | dict[str, Any]:
    """
    Fit ln t_num against ln ε over prior sweep CSVs and write ``fit.json``.

    Records with different blowup thresholds are fitted per threshold; the
    largest threshold gives the reported fit and the two largest give the
    threshold robustness. At the critical power the trend table is written
    instead of a fit.

    :raises blowuplab.lifespan.fit.InsufficientDataError: If no file holds records.
    :raises AcceptanceFailure: If the slope misses the prediction by more than 20 %,
        or thresholds disagree by more than 5 %.
    """
    records: list[LifespanRecord] = []
    for path in sweep_paths:
        records.extend(load_sweep(path))
    if not records:
        raise InsufficientDataError("no sweep records to fit")
    problems = {(r.dim_n, r.p_exponent) for r in records}
    if len(problems) != 1:
        raise ValueError(f"sweep files mix several (N, p) problems: {sorted(problems)}")
    dim_n, p = problems.pop()

    with RunWriter(out_dir / "fit", "fit", config) as writer:
        if _is_critical(dim_n, p):
            trend = critical_trend(records, dim_n, p)
            payload = {
                "critical": True,
                "dim_n": dim_n,
                "p_exponent": p,
                "monotone": trend.monotone,
                "rows": [asdict(row) for row in trend.rows],
            }
            writer.write_json("fit.json", payload)
            writer.set_outcome({"critical": True, "monotone": trend.monotone})
            return payload

        predicted_exponent(dim_n, p)
        by_threshold: dict[float, list[LifespanRecord]] = {}
        for record in records:
            by_threshold.setdefault(record.threshold, []).append(record)
        thresholds = sorted(by_threshold, reverse=True)
        fit = fit_subcritical(by_threshold[thresholds[0]])
        payload = fit.model_dump(mode="json") | {
            "critical": False,
            "dim_n": dim_n,
            "p_exponent": p,
            "threshold": thresholds[0],
            "relative_deviation": fit.relative_deviation,
        }
        failures: list[CheckFailure] = []
        if fit.relative_deviation > FIT_TOLERANCE:
            failures.append(
                CheckFailure(
                    f"slope {fit.slope:.4f} deviates {fit.relative_deviation:.1%} "
                    f"from {fit.predicted_slope:.4f}"
                )
            )
        if len(thresholds) >= 2:
            robustness = threshold_robustness(
                by_threshold[thresholds[1]], by_threshold[thresholds[0]]
            )
            payload["threshold_robustness"] = {
                "thresholds": thresholds[:2],
                "relative_difference": robustness,
            }
            if robustness > THRESHOLD_ROBUSTNESS_TOL:
                failures.append(
                    CheckFailure(
                        f"slopes at thresholds {thresholds[:2]} differ by {robustness:.1%}"
                    )
                )
        writer.write_json("fit.json", payload)
        writer.set_outcome({"slope": fit.slope, "passed": not failures})
        if failures:
            raise AcceptanceFailure("fit", failures)
    return fit


def _test_params(config: RunConfig, outcome: SimulationOutcome) -> TestFunctionParams:
    spec = config.testfam
    params = TestFunctionParams(
        beta=spec.beta,
        quad_tolerance=spec.quad_tolerance,
        quad_max_subdivisions=spec.quad_max_subdivisions,
    )
    if spec.t_shift is not None:
        return params.model_copy(update={"t_shift": spec.t_shift})
    shift = select_t_shift(
        outcome.geom, params, outcome.data.f_profile, outcome.data.g_profile
    )
    return params.model_copy(update={"t_shift": shift})


def _write_trace(writer: RunWriter, trace: FunctionalTrace, axis: str = "t") -> None:
    writer.write_csv(
        f"traces/{trace.name}.csv", (axis, "value"), zip(trace.times, trace.values)
    )


def _probe_payload(probe: ScalingProbe) -> dict[str, Any]:
    return {
        "scales": list(probe.scales),
        "masses": list(probe.masses),
        "slope": probe.slope,
        "expected_slope": probe.expected_slope,
        "within_tolerance": probe.within_tolerance,
    }


def run_diagnose(
    config: RunConfig, out_dir: Path, *, stride: int | None = None
) -> dict[str, Any]:
    """
    Simulate with history and write functional traces and probes.

    Writes ``traces/{G,source,F_beta,Y}.csv`` and ``probes.json`` holding the
    masses per scale, the test-function identity balance, the volume probe
    and the concentration probe.

    :raises AcceptanceFailure: If G decreases on a positive-g blowup run or the
        volume probe misses its slope.
    :raises blowuplab.testfam.family.TShiftSearchError: If no shift is found.
    """
    setup = prepare_simulation(config)
    with RunWriter(out_dir / "diagnose", "diagnose", config) as writer:
        outcome = simulate_with_history(setup, stride=stride or config.stride)
        geom, history = outcome.geom, outcome.history
        p = outcome.solver.p_exponent
        diag = config.diagnostics
        failures: list[CheckFailure] = []

        g_trace, source_trace = functional_g(history, geom, p)
        _write_trace(writer, g_trace)
        _write_trace(writer, source_trace)
        if _g_checked(outcome):
            failures.extend(g_monotone_failures(g_trace))
        g_violations = len(failures)

        scales = sorted(set(diag.scales))
        params = _test_params(config, outcome)
        table = PhiBetaTable(geom, params.beta, history.radii)
        _write_trace(writer, functional_f_beta(history, geom, params, p=p, table=table))
        _write_trace(writer, y_aggregate(history, geom, params, p, scales), axis="R")

        masses = []
        for scale in scales:
            harmonic, truncated = weighted_mass(history, geom, p, scale)
            phi_mass, _ = weighted_mass(
                history, geom, p, scale, weight=MassWeight.PHI_BETA, params=params, table=table
            )
            concentration, _ = concentration_mass(history, geom, p, scale)
            masses.append(
                {
                    "R": scale,
                    "harmonic": harmonic,
                    "phi_beta": phi_mass,
                    "concentration": concentration,
                    "truncated": truncated,
                }
            )

        times = history.times
        window = diag.identity_window or (float(times[0]), 0.5 * float(times[-1]))
        balance = tfm_residual(history, geom, p, scales[-1], window)

        probes: dict[str, Any] = {
            "t_shift": params.t_shift,
            "masses": masses,
            "identity": {
                "window": list(window),
                "R": scales[-1],
                "lhs": balance.lhs,
                "rhs": balance.rhs,
                "residual": balance.residual,
            },
        }
        try:
            volume = volume_scaling_probe(geom, p, diag.volume_scales)
        except DomainError as exc:
            probes["volume"] = {"skipped": str(exc)}
        else:
            probes["volume"] = _probe_payload(volume)
            if not volume.within_tolerance:
                failures.append(
                    CheckFailure(
                        f"volume slope {volume.slope:.4f} vs expected {volume.expected_slope:.4f}"
                    )
                )
        try:
            probes["concentration"] = _probe_payload(
                concentration_probe(history, geom, p, scales)
            )
        except InsufficientDataError as exc:
            probes["concentration"] = {"skipped": str(exc)}

        probes["g_monotone"] = {"checked": _g_checked(outcome), "violations": g_violations}
        probes["outcome"] = _record_payload(outcome.record)
        writer.write_json("probes.json", probes)
        writer.set_outcome(_record_payload(outcome.record) | {"passed": not failures})
        if failures:
            raise AcceptanceFailure("diagnose", failures)
    return probes
