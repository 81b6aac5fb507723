"""Special functions: gamma, Pochhammer, modified Bessel and Gauss hypergeometric."""

from blowuplab.specfun.base import (
    AccuracyError,
    BesselOrder,
    DomainError,
    EvalResult,
    SpecialFunctionError,
    SpecialFunctionRangeError,
)
from blowuplab.specfun.bessel import (
    bessel_i,
    bessel_i_scaled,
    bessel_ik_scaled,
    bessel_k,
    bessel_k_scaled,
)
from blowuplab.specfun.gamma import gamma_fn, pochhammer, regularized_lower_gamma
from blowuplab.specfun.hypergeometric import HypergeometricParams, hyp2f1

__all__ = [
    "AccuracyError",
    "BesselOrder",
    "DomainError",
    "EvalResult",
    "HypergeometricParams",
    "SpecialFunctionError",
    "SpecialFunctionRangeError",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_ik_scaled",
    "bessel_k",
    "bessel_k_scaled",
    "gamma_fn",
    "hyp2f1",
    "pochhammer",
    "regularized_lower_gamma",
]
