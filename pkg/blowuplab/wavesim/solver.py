"""
Leapfrog evolution of the radial semilinear wave equation outside the unit ball.

u_tt = u_rr + (N-1)/r u_r + |u|^p on 1 < r < r_max with u(1, t) = 0. The outer
node is held at zero; grids built by :meth:`RadialGrid.for_horizon` keep it
outside the numerical domain of dependence for the whole run.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from blowuplab.schema.records import LifespanRecord
from blowuplab.testfam.weights import harmonic_u_array
from blowuplab.wavesim.data import InitialData

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 20000


class SolverConfigError(ValueError):
    """Raised when grid or solver parameters are inconsistent."""


class BlowupSignal(Exception):
    """Raised by :func:`step` when the state stops being finite."""

    def __init__(self, t: float) -> None:
        super().__init__(f"non-finite state at t={t:.6g}")
        self.t = t


@dataclass(frozen=True)
class RadialGrid:
    """
    Nodes r_j = 1 + j·dr for j = 0 .. n_points-1.
    """

    dr: float
    n_points: int
    dim_n: int = 3

    def __post_init__(self) -> None:
        if not self.dr > 0.0:
            raise SolverConfigError(f"dr must be positive, got {self.dr}")
        if self.n_points < 3:
            raise SolverConfigError(f"grid needs at least 3 points, got {self.n_points}")
        if self.dim_n < 3:
            raise SolverConfigError(f"dimension must be >= 3, got {self.dim_n}")
        # keeps the backward stencil coefficient positive at every node
        if not self.dr < 2.0 / (self.dim_n - 1):
            raise SolverConfigError(f"dr={self.dr} too coarse for N={self.dim_n}")

    @property
    def r(self) -> NDArray[np.float64]:
        return 1.0 + self.dr * np.arange(self.n_points)

    @property
    def r_max(self) -> float:
        return 1.0 + (self.n_points - 1) * self.dr

    @classmethod
    def for_horizon(
        cls, r0: float, t_horizon: float, dr: float, cfl: float, dim_n: int = 3
    ) -> RadialGrid:
        """
        Smallest grid with r_max >= r0 + t_horizon/cfl + 2·dr.

        The leapfrog stencil spreads one cell per step, so t_horizon/dt steps
        reach at most t_horizon/cfl beyond the data.
        """
        if not 0.0 < cfl < 1.0:
            raise SolverConfigError(f"cfl must lie in (0, 1), got {cfl}")
        reach = r0 + t_horizon / cfl + 2.0 * dr
        n_points = int(math.ceil((reach - 1.0) / dr)) + 1
        return cls(dr=dr, n_points=n_points, dim_n=dim_n)


@dataclass(frozen=True)
class SolverConfig:
    """
    :param p_exponent: Power p > 1 of the source |u|^p.
    :param cfl_factor: dt / dr, in (0, 1).
    :param blowup_threshold: Level whose first crossing by max|u| marks blowup.
    :param t_horizon: Final time of a run.
    :param nonlinear: Include the source term.
    """

    p_exponent: float
    t_horizon: float
    cfl_factor: float = 0.45
    blowup_threshold: float = 1e6
    nonlinear: bool = True

    def __post_init__(self) -> None:
        if not self.p_exponent > 1.0:
            raise SolverConfigError(f"p must exceed 1, got {self.p_exponent}")
        if not 0.0 < self.cfl_factor < 1.0:
            raise SolverConfigError(f"cfl_factor must lie in (0, 1), got {self.cfl_factor}")
        if not self.blowup_threshold > 0.0:
            raise SolverConfigError("blowup_threshold must be positive")
        if not self.t_horizon > 0.0:
            raise SolverConfigError("t_horizon must be positive")

    def dt(self, grid: RadialGrid) -> float:
        return self.cfl_factor * grid.dr


@dataclass(frozen=True)
class WaveState:
    """Two consecutive time levels; ``u_curr`` lives at ``t = step_index·dt``."""

    u_prev: NDArray[np.float64]
    u_curr: NDArray[np.float64]
    t: float
    step_index: int


def _radial_laplacian(u: NDArray[np.float64], grid: RadialGrid) -> NDArray[np.float64]:
    """Centred Δ_r on interior nodes; zero on both boundary nodes."""
    dr = grid.dr
    r = grid.r[1:-1]
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dr * dr) + (grid.dim_n - 1) / r * (
        u[2:] - u[:-2]
    ) / (2.0 * dr)
    return out


def _source(u: NDArray[np.float64], config: SolverConfig) -> NDArray[np.float64]:
    if not config.nonlinear:
        return np.zeros_like(u)
    return np.abs(u) ** config.p_exponent


def init_state(grid: RadialGrid, data: InitialData, config: SolverConfig) -> WaveState:
    """
    Second-order Taylor start: u¹ = εf + dt·εg + dt²/2 (Δ_r εf + |εf|^p).

    :param grid: Radial grid.
    :type grid: RadialGrid
    :param data: Initial data.
    :type data: blowuplab.wavesim.data.InitialData
    :param config: Solver parameters.
    :type config: SolverConfig
    :return: State at step 1.
    :rtype: WaveState
    :raises SolverConfigError: If p exceeds N/(N-2) or the data leave the grid.
    """
    n = grid.dim_n
    if config.p_exponent > n / (n - 2) + 1e-12:
        raise SolverConfigError(f"p={config.p_exponent} exceeds N/(N-2)={n / (n - 2):.6g}")
    if data.support[1] >= grid.r_max - grid.dr:
        raise SolverConfigError(f"data support {data.support} reaches r_max={grid.r_max}")

    dt = config.dt(grid)
    r = grid.r
    u0 = data.epsilon * np.asarray(data.f_profile(r), dtype=float)
    v0 = data.epsilon * np.asarray(data.g_profile(r), dtype=float)
    u0[0] = u0[-1] = 0.0
    v0[0] = v0[-1] = 0.0
    u1 = u0 + dt * v0 + 0.5 * dt * dt * (_radial_laplacian(u0, grid) + _source(u0, config))
    u1[0] = u1[-1] = 0.0
    return WaveState(u_prev=u0, u_curr=u1, t=dt, step_index=1)


def step(state: WaveState, grid: RadialGrid, config: SolverConfig) -> WaveState:
    """
    One leapfrog step.

    :raises BlowupSignal: If the new level contains non-finite values.
    """
    dt = config.dt(grid)
    u = state.u_curr
    rhs = _radial_laplacian(u, grid) + _source(u, config)
    u_next = 2.0 * u - state.u_prev + dt * dt * rhs
    u_next[0] = u_next[-1] = 0.0
    index = state.step_index + 1
    t = index * dt
    if not np.all(np.isfinite(u_next)):
        raise BlowupSignal(t)
    return WaveState(u_prev=u, u_curr=u_next, t=t, step_index=index)


def advance(state: WaveState, grid: RadialGrid, config: SolverConfig, n_steps: int) -> WaveState:
    """Apply :func:`step` ``n_steps`` times."""
    for _ in range(n_steps):
        state = step(state, grid, config)
    return state


@dataclass
class SolutionHistory:
    """
    Snapshots (t, u, ∂ₜu) every ``stride`` steps.

    Snapshot 0 is (εf, εg) exactly; later ones take ∂ₜu from the centred
    difference (uⁿ⁺¹ - uⁿ⁻¹) / 2dt.
    """

    grid: RadialGrid
    stride: int = 1
    _times: list[float] = field(default_factory=list, init=False, repr=False)
    _u: list[NDArray[np.float64]] = field(default_factory=list, init=False, repr=False)
    _ut: list[NDArray[np.float64]] = field(default_factory=list, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise SolverConfigError(f"stride must be >= 1, got {self.stride}")

    def record(self, t: float, u: NDArray[np.float64], ut: NDArray[np.float64]) -> None:
        self._times.append(t)
        self._u.append(np.array(u, dtype=float))
        self._ut.append(np.array(ut, dtype=float))

    def observe(self, before: WaveState, after: WaveState, dt: float) -> None:
        """Record level ``before.step_index`` if it falls on the stride."""
        if before.step_index % self.stride == 0:
            ut = (after.u_curr - before.u_prev) / (2.0 * dt)
            self.record(before.t, before.u_curr, ut)

    def __len__(self) -> int:
        return len(self._times)

    @property
    def radii(self) -> NDArray[np.float64]:
        return self.grid.r

    @property
    def times(self) -> NDArray[np.float64]:
        return np.asarray(self._times, dtype=float)

    @property
    def u(self) -> NDArray[np.float64]:
        """Shape (n_snapshots, n_points)."""
        return np.vstack(self._u) if self._u else np.empty((0, self.grid.n_points))

    @property
    def ut(self) -> NDArray[np.float64]:
        return np.vstack(self._ut) if self._ut else np.empty((0, self.grid.n_points))


def run_until_blowup(
    grid: RadialGrid,
    data: InitialData,
    config: SolverConfig,
    *,
    recorder: SolutionHistory | None = None,
) -> LifespanRecord:
    """
    Evolve until max|u| first reaches the threshold or the horizon passes.

    :param grid: Radial grid.
    :type grid: RadialGrid
    :param data: Initial data.
    :type data: blowuplab.wavesim.data.InitialData
    :param config: Solver parameters.
    :type config: SolverConfig
    :param recorder: Optional snapshot history filled during the run.
    :type recorder: SolutionHistory | None
    :return: Record with ``t_num`` set on blowup, ``None`` at the horizon.
    :rtype: blowuplab.schema.records.LifespanRecord
    """
    dt = config.dt(grid)
    state = init_state(grid, data, config)
    if recorder is not None:
        velocity = data.epsilon * np.asarray(data.g_profile(grid.r), dtype=float)
        velocity[0] = velocity[-1] = 0.0
        recorder.record(0.0, state.u_prev, velocity)

    def _record(t_num: float | None) -> LifespanRecord:
        return LifespanRecord(
            epsilon=data.epsilon,
            t_num=t_num,
            dr=grid.dr,
            dt=dt,
            threshold=config.blowup_threshold,
            t_horizon=config.t_horizon,
            dim_n=grid.dim_n,
            p_exponent=config.p_exponent,
        )

    if np.max(np.abs(state.u_curr)) >= config.blowup_threshold:
        return _record(state.t)

    n_max = int(math.floor(config.t_horizon / dt + 1e-9))
    while state.step_index < n_max:
        try:
            nxt = step(state, grid, config)
        except BlowupSignal as signal:
            logger.debug("non-finite state at t=%.6g", signal.t)
            return _record(signal.t)
        if recorder is not None:
            recorder.observe(state, nxt, dt)
        state = nxt
        if np.max(np.abs(state.u_curr)) >= config.blowup_threshold:
            logger.debug(
                "eps=%.6g crossed %.3g at t=%.6g", data.epsilon, config.blowup_threshold, state.t
            )
            return _record(state.t)
        if state.step_index % PROGRESS_EVERY == 0:
            peak = float(np.max(np.abs(state.u_curr)))
            logger.debug("eps=%.6g t=%.6g max|u|=%.3e", data.epsilon, state.t, peak)

    logger.debug("eps=%.6g reached horizon %.6g", data.epsilon, config.t_horizon)
    return _record(None)


def discrete_harmonic_weight(grid: RadialGrid) -> NDArray[np.float64]:
    """
    Weights c_j ≈ r_j^{N-1} U(r_j) annihilating the discrete radial Laplacian.

    Σ_j c_j (Δ_r u)_j = 0 for every u vanishing at both ends, so
    Σ_j c_j ∂ₜu_j is nondecreasing along the scheme up to round-off.
    c_0 = 0 and c_1 = r_1^{N-1} U(r_1); the rest follows the recurrence
    c_{k+1} γ_{k+1} = -(c_{k-1} α_{k-1} + c_k β).
    """
    r = grid.r
    dr = grid.dr
    n = grid.dim_n
    forward = 1.0 / dr**2 + (n - 1) / (2.0 * r * dr)
    backward = 1.0 / dr**2 - (n - 1) / (2.0 * r * dr)
    centre = -2.0 / dr**2
    c = np.zeros_like(r)
    c[1] = r[1] ** (n - 1) * float(harmonic_u_array(n, r[1]))
    for k in range(1, grid.n_points - 1):
        c[k + 1] = -(forward[k - 1] * c[k - 1] + centre * c[k]) / backward[k + 1]
    c[-1] = 0.0
    return c


