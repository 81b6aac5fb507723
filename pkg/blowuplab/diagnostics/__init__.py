"""Test-function functionals and scaling probes on simulated histories."""

from blowuplab.diagnostics.cutoff import (
    CutoffSpec,
    cutoff_power,
    dual_exponent,
    eta,
    eta_derivatives,
    eta_star,
)
from blowuplab.diagnostics.functionals import (
    IdentityBalance,
    MassWeight,
    ResolutionError,
    concentration_mass,
    functional_f_beta,
    functional_g,
    tfm_residual,
    weighted_mass,
    y_aggregate,
)
from blowuplab.diagnostics.probes import ScalingProbe, concentration_probe, volume_scaling_probe

__all__ = [
    "CutoffSpec",
    "IdentityBalance",
    "MassWeight",
    "ResolutionError",
    "ScalingProbe",
    "concentration_mass",
    "concentration_probe",
    "cutoff_power",
    "dual_exponent",
    "eta",
    "eta_derivatives",
    "eta_star",
    "functional_f_beta",
    "functional_g",
    "tfm_residual",
    "volume_scaling_probe",
    "weighted_mass",
    "y_aggregate",
]
