"""Harmonic weight, eigenfunctions φ_λ and the slowly decaying family Φ_β."""

from blowuplab.testfam.family import (
    SandwichScan,
    TestFamilyError,
    TShiftSearchError,
    dt_relation_check,
    harmonic_pairing,
    initial_functional,
    light_cone_closed_form,
    lower_bound_constant,
    phi_beta,
    phi_beta_bounds,
    sandwich_scan,
    select_t_shift,
    shifted_phi,
    yz_integral,
)
from blowuplab.testfam.quadrature import QuadratureAccuracyError, adaptive_gauss
from blowuplab.testfam.table import PhiBetaTable
from blowuplab.testfam.weights import (
    harmonic_u,
    phi_lambda,
    psi1,
    psi2,
    verify_eigen_equation,
)

__all__ = [
    "PhiBetaTable",
    "QuadratureAccuracyError",
    "SandwichScan",
    "TShiftSearchError",
    "TestFamilyError",
    "adaptive_gauss",
    "dt_relation_check",
    "harmonic_pairing",
    "harmonic_u",
    "initial_functional",
    "light_cone_closed_form",
    "lower_bound_constant",
    "phi_beta",
    "phi_beta_bounds",
    "phi_lambda",
    "psi1",
    "psi2",
    "sandwich_scan",
    "select_t_shift",
    "shifted_phi",
    "verify_eigen_equation",
    "yz_integral",
]
