"""Lifespan exponents, ε sweeps and scaling fits."""

from blowuplab.lifespan.exponents import (
    NonCriticalExponentError,
    beta_critical,
    gamma_np,
    predicted_exponent,
    strauss_exponent,
)
from blowuplab.lifespan.fit import (
    CriticalTrend,
    InsufficientDataError,
    critical_trend,
    fit_subcritical,
    threshold_robustness,
)
from blowuplab.lifespan.sweep import SweepPlan, check_monotone, sweep

__all__ = [
    "CriticalTrend",
    "InsufficientDataError",
    "NonCriticalExponentError",
    "SweepPlan",
    "beta_critical",
    "check_monotone",
    "critical_trend",
    "fit_subcritical",
    "gamma_np",
    "predicted_exponent",
    "strauss_exponent",
    "sweep",
    "threshold_robustness",
]
