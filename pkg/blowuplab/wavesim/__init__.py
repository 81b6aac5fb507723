"""Radial leapfrog solver for u_tt - Δu = |u|^p outside the unit ball."""

from blowuplab.wavesim.data import (
    Bump,
    CombinedProfile,
    InitialData,
    InitialDataError,
    OutgoingPulse,
    ZeroProfile,
    check_positivity,
    make_bump,
    make_dipole,
)
from blowuplab.wavesim.solver import (
    BlowupSignal,
    RadialGrid,
    SolutionHistory,
    SolverConfig,
    SolverConfigError,
    WaveState,
    advance,
    discrete_harmonic_weight,
    init_state,
    run_until_blowup,
    step,
)

__all__ = [
    "BlowupSignal",
    "Bump",
    "CombinedProfile",
    "InitialData",
    "InitialDataError",
    "OutgoingPulse",
    "RadialGrid",
    "SolutionHistory",
    "SolverConfig",
    "SolverConfigError",
    "WaveState",
    "ZeroProfile",
    "advance",
    "check_positivity",
    "discrete_harmonic_weight",
    "init_state",
    "make_bump",
    "make_dipole",
    "run_until_blowup",
    "step",
]
