from __future__ import annotations

import numpy as np
import pytest

from blowuplab.diagnostics import functional_g
from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.testfam import harmonic_pairing
from blowuplab.wavesim import (
    InitialData,
    InitialDataError,
    OutgoingPulse,
    RadialGrid,
    SolutionHistory,
    SolverConfig,
    SolverConfigError,
    WaveState,
    ZeroProfile,
    advance,
    check_positivity,
    discrete_harmonic_weight,
    init_state,
    make_bump,
    make_dipole,
    run_until_blowup,
    step,
)


def _bump_data(epsilon: float = 1.0) -> InitialData:
    return InitialData(ZeroProfile(), make_bump(1.5, 2.5), epsilon, (1.5, 2.5))


def _pulse_data(a: float = 1.5, b: float = 2.5) -> InitialData:
    pulse = make_bump(a, b)
    return InitialData(OutgoingPulse(pulse, "f"), OutgoingPulse(pulse, "g"), 1.0, (a, b))


def test_grid_for_horizon_covers_domain_of_dependence() -> None:
    grid = RadialGrid.for_horizon(2.5, 4.0, 0.1, 0.45, 3)
    assert grid.r_max >= 2.5 + 4.0 / 0.45 + 0.2
    assert grid.r[0] == 1.0
    assert grid.r.size == grid.n_points


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [
        ({"dr": 0.0, "n_points": 10}, "dr must be positive"),
        ({"dr": 0.1, "n_points": 2}, "at least 3 points"),
        ({"dr": 0.9, "n_points": 10, "dim_n": 5}, "too coarse"),
    ],
)
def test_grid_rejects_bad_parameters(kwargs: dict, message: str) -> None:
    with pytest.raises(SolverConfigError, match=message):
        RadialGrid(**kwargs)


def test_solver_config_rejects_bad_parameters() -> None:
    with pytest.raises(SolverConfigError):
        SolverConfig(p_exponent=1.0, t_horizon=1.0)
    with pytest.raises(SolverConfigError):
        SolverConfig(p_exponent=2.0, t_horizon=1.0, cfl_factor=1.0)
    with pytest.raises(SolverConfigError):
        SolverConfig(p_exponent=2.0, t_horizon=0.0)


def test_init_state_rejects_supercritical_power() -> None:
    grid = RadialGrid.for_horizon(2.5, 2.0, 0.1, 0.45, 3)
    with pytest.raises(SolverConfigError, match="exceeds N/\\(N-2\\)"):
        init_state(grid, _bump_data(), SolverConfig(p_exponent=3.5, t_horizon=2.0))


def test_init_state_rejects_data_reaching_outer_node() -> None:
    grid = RadialGrid(dr=0.1, n_points=16)
    with pytest.raises(SolverConfigError, match="reaches r_max"):
        init_state(grid, _bump_data(), SolverConfig(p_exponent=2.0, t_horizon=1.0))


def test_initial_data_validation() -> None:
    with pytest.raises(InitialDataError):
        make_bump(1.0, 2.0)
    with pytest.raises(InitialDataError):
        make_bump(2.0, 2.0)
    with pytest.raises(InitialDataError):
        InitialData(ZeroProfile(), make_bump(1.5, 2.5), 1.0, (0.5, 2.5))
    with pytest.raises(InitialDataError):
        InitialData(ZeroProfile(), make_bump(1.5, 2.5), -1.0, (1.5, 2.5))
    with pytest.raises(InitialDataError):
        InitialData(ZeroProfile(), make_bump(1.5, 3.0), 1.0, (1.5, 2.5))


def test_dipole_has_vanishing_harmonic_pairing(geom3: ExteriorGeometry) -> None:
    dipole = make_dipole(1.5, 2.5, 1.0, geom3)
    data = InitialData(ZeroProfile(), dipole, 1.0, (1.5, 2.5))
    scale = harmonic_pairing(geom3, make_bump(1.5, 2.0))
    assert abs(check_positivity(data, geom3)) <= 1e-12 * scale


def test_bump_data_are_positive(geom3: ExteriorGeometry) -> None:
    assert check_positivity(_bump_data(), geom3) > 0.0


def test_outgoing_pulse_velocity_is_minus_derivative_over_r() -> None:
    pulse = make_bump(1.5, 2.5)
    r = np.linspace(1.6, 2.4, 9)
    h = 1e-6
    numeric = (pulse(r + h) - pulse(r - h)) / (2.0 * h)
    assert np.allclose(OutgoingPulse(pulse, "g")(r), -numeric / r, rtol=1e-6, atol=1e-9)
    assert np.allclose(OutgoingPulse(pulse, "f")(r), pulse(r) / r)


def test_dirichlet_condition_and_finite_speed() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=4.0)
    grid = RadialGrid.for_horizon(2.5, 4.0, 0.1, config.cfl_factor, 3)
    state = advance(init_state(grid, _bump_data(), config), grid, config, 19)
    assert state.step_index == 20
    assert state.u_curr[0] == 0.0
    outside = grid.r >= 2.5 + (state.step_index + 1) * grid.dr
    assert outside.any()
    assert np.all(state.u_curr[outside] == 0.0)


def test_linear_scheme_converges_at_second_order() -> None:
    # a wide pulse keeps the coarse grids in the asymptotic regime
    a, b = 1.5, 9.5
    t_final = 1.0
    errors = []
    for dr in (0.025, 0.0125, 0.00625):
        config = SolverConfig(p_exponent=2.0, t_horizon=t_final, nonlinear=False)
        grid = RadialGrid.for_horizon(b, t_final, dr, config.cfl_factor, 3)
        n_steps = int(round(t_final / config.dt(grid)))
        state = advance(init_state(grid, _pulse_data(a, b), config), grid, config, n_steps - 1)
        exact = make_bump(a, b)(grid.r - state.t) / grid.r
        errors.append(float(np.max(np.abs(state.u_curr - exact))))
    orders = np.log2(np.asarray(errors[:-1]) / np.asarray(errors[1:]))
    assert orders[-1] >= 1.8


def test_linear_pulse_travels_at_unit_speed() -> None:
    t_final = 5.0
    config = SolverConfig(p_exponent=2.0, t_horizon=t_final, nonlinear=False)
    grid = RadialGrid.for_horizon(2.5, t_final, 0.02, config.cfl_factor, 3)
    start = init_state(grid, _pulse_data(), config)
    n_steps = int(round(t_final / config.dt(grid)))
    end = advance(start, grid, config, n_steps - 1)

    def centroid(u: np.ndarray) -> float:
        weight = (grid.r * u) ** 2
        return float(grid.r @ weight / weight.sum())

    speed = (centroid(end.u_curr) - centroid(start.u_prev)) / end.t
    assert speed == pytest.approx(1.0, abs=0.03)


def test_taylor_start_without_displacement_is_pure_velocity() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=1.0)
    grid = RadialGrid.for_horizon(2.5, 1.0, 0.05, config.cfl_factor, 3)
    g = make_bump(1.5, 2.5)
    state = init_state(grid, InitialData(ZeroProfile(), g, 0.7, (1.5, 2.5)), config)
    expected = config.dt(grid) * (0.7 * g(grid.r))
    expected[0] = expected[-1] = 0.0
    assert np.array_equal(state.u_curr, expected)
    assert not state.u_prev.any()


def test_zero_amplitude_stays_zero() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=2.0)
    grid = RadialGrid.for_horizon(2.5, 2.0, 0.1, config.cfl_factor, 3)
    state = advance(init_state(grid, _bump_data(0.0), config), grid, config, 40)
    assert not state.u_prev.any()
    assert not state.u_curr.any()


def test_taylor_start_remainder_is_second_order_in_dt() -> None:
    bump = make_bump(1.5, 2.5)
    data = InitialData(bump, bump, 1.0, (1.5, 2.5))
    config = SolverConfig(p_exponent=2.0, t_horizon=1.0)
    remainders = []
    for dr in (0.02, 0.01):
        grid = RadialGrid.for_horizon(2.5, 1.0, dr, config.cfl_factor, 3)
        state = init_state(grid, data, config)
        velocity = bump(grid.r)
        velocity[0] = velocity[-1] = 0.0
        jump = state.u_curr - state.u_prev - config.dt(grid) * velocity
        remainders.append(float(np.max(np.abs(jump))))
    assert 3.5 < remainders[0] / remainders[1] < 4.5


def test_single_impulse_matches_stencil() -> None:
    dr, cfl, j = 0.125, 0.5, 8
    grid = RadialGrid(dr=dr, n_points=20, dim_n=3)
    config = SolverConfig(p_exponent=2.0, t_horizon=1.0, cfl_factor=cfl)
    dt = cfl * dr
    u_curr = np.zeros(grid.n_points)
    u_curr[j] = 1.0
    state = WaveState(u_prev=np.zeros(grid.n_points), u_curr=u_curr, t=dt, step_index=1)
    nxt = step(state, grid, config)
    r = grid.r
    assert nxt.u_curr[j] == pytest.approx(2.0 + dt * dt * (1.0 - 2.0 / dr**2), rel=1e-14)
    assert nxt.u_curr[j + 1] == pytest.approx(
        dt * dt * (1.0 / dr**2 - 2.0 / (2.0 * r[j + 1] * dr)), rel=1e-14
    )
    assert nxt.u_curr[j - 1] == pytest.approx(
        dt * dt * (1.0 / dr**2 + 2.0 / (2.0 * r[j - 1] * dr)), rel=1e-14
    )
    untouched = np.ones(grid.n_points, dtype=bool)
    untouched[j - 1 : j + 2] = False
    assert not nxt.u_curr[untouched].any()
    assert nxt.t == 2 * dt
    assert nxt.step_index == 2


def test_linear_solution_scales_with_velocity() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=2.0, nonlinear=False)
    grid = RadialGrid.for_horizon(2.5, 2.0, 0.05, config.cfl_factor, 3)
    single = InitialData(ZeroProfile(), make_bump(1.5, 2.5), 1e-3, (1.5, 2.5))
    double = InitialData(ZeroProfile(), make_bump(1.5, 2.5, 2.0), 1e-3, (1.5, 2.5))
    u1 = advance(init_state(grid, single, config), grid, config, 30).u_curr
    u2 = advance(init_state(grid, double, config), grid, config, 30).u_curr
    assert np.max(np.abs(u2 - 2.0 * u1)) <= 1e-10 * np.max(np.abs(u2))


def test_large_data_lifespan_is_stable_under_refinement() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=100.0)
    lifespans = []
    for dr in (0.05, 0.025):
        grid = RadialGrid.for_horizon(2.5, 100.0, dr, config.cfl_factor, 3)
        record = run_until_blowup(grid, _bump_data(2.0), config)
        assert record.t_num is not None
        lifespans.append(record.t_num)
    assert abs(lifespans[1] - lifespans[0]) <= 0.05 * lifespans[1]


def test_lifespan_does_not_increase_as_threshold_drops() -> None:
    grid = RadialGrid.for_horizon(2.5, 100.0, 0.1, 0.45, 3)
    lifespans = []
    for threshold in (1e6, 1e4, 1e2, 1e0):
        config = SolverConfig(p_exponent=2.0, t_horizon=100.0, blowup_threshold=threshold)
        record = run_until_blowup(grid, _bump_data(2.0), config)
        assert record.t_num is not None
        lifespans.append(record.t_num)
    assert all(later <= earlier for earlier, later in zip(lifespans, lifespans[1:]))


def test_linear_run_reaches_horizon() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=2.0, nonlinear=False)
    grid = RadialGrid.for_horizon(2.5, 2.0, 0.1, config.cfl_factor, 3)
    record = run_until_blowup(grid, _bump_data(), config)
    assert record.t_num is None
    assert record.reached_horizon
    assert record.dt == pytest.approx(0.045)


def test_threshold_crossing_sets_lifespan() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=4.0, blowup_threshold=1e-3)
    grid = RadialGrid.for_horizon(2.5, 4.0, 0.1, config.cfl_factor, 3)
    record = run_until_blowup(grid, _bump_data(), config)
    assert record.t_num is not None
    assert 0.0 < record.t_num <= 4.0
    assert record.threshold == 1e-3


def test_runs_are_deterministic() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=3.0, blowup_threshold=5.0)
    grid = RadialGrid.for_horizon(2.5, 3.0, 0.1, config.cfl_factor, 3)
    first = run_until_blowup(grid, _bump_data(8.0), config)
    second = run_until_blowup(grid, _bump_data(8.0), config)
    assert first == second


def test_discrete_harmonic_weight_annihilates_laplacian() -> None:
    grid = RadialGrid(dr=0.1, n_points=60)
    weight = discrete_harmonic_weight(grid)
    assert weight[0] == 0.0
    assert np.all(weight[1:-1] > 0.0)
    r = grid.r
    u = np.sin(np.pi * (r - 1.0) / (r[-3] - 1.0)) ** 2
    u[-3:] = 0.0
    u[0] = 0.0
    lap = np.zeros_like(u)
    lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / grid.dr**2 + 2.0 / r[1:-1] * (
        u[2:] - u[:-2]
    ) / (2.0 * grid.dr)
    assert abs(float(weight @ lap)) <= 1e-9 * float(np.abs(weight) @ np.abs(lap))


def test_weighted_momentum_is_nondecreasing(geom3: ExteriorGeometry) -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=4.0)
    grid = RadialGrid.for_horizon(2.5, 4.0, 0.1, config.cfl_factor, 3)
    history = SolutionHistory(grid, stride=2)
    run_until_blowup(grid, _bump_data(2.0), config, recorder=history)
    g_trace, source = functional_g(history, geom3, 2.0)
    values = np.asarray(g_trace.values)
    assert len(history) > 10
    assert np.all(np.diff(values) >= -1e-8 * np.max(np.abs(values)))
    assert all(v >= 0.0 for v in source.values)


def test_history_first_snapshot_holds_initial_data() -> None:
    config = SolverConfig(p_exponent=2.0, t_horizon=1.0)
    grid = RadialGrid.for_horizon(2.5, 1.0, 0.1, config.cfl_factor, 3)
    history = SolutionHistory(grid, stride=3)
    data = _bump_data(0.5)
    run_until_blowup(grid, data, config, recorder=history)
    assert history.times[0] == 0.0
    assert np.allclose(history.ut[0][1:-1], 0.5 * make_bump(1.5, 2.5)(grid.r[1:-1]))
    assert np.allclose(np.diff(history.times), 3 * config.dt(grid))
    with pytest.raises(SolverConfigError):
        SolutionHistory(grid, stride=0)
