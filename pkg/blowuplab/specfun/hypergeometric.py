"""Gauss hypergeometric function F(a, b, c; z) on 0 <= z < 1."""

from __future__ import annotations

import math
from dataclasses import dataclass

from blowuplab.specfun.base import MACHINE_EPS, AccuracyError, DomainError, EvalResult

MAX_SERIES_TERMS = 50_000
EULER_SWITCH = 0.75


@dataclass(frozen=True)
class HypergeometricParams:
    """
    Parameters of F(a, b, c; z).

    :param a: First numerator parameter.
    :type a: float
    :param b: Second numerator parameter.
    :type b: float
    :param c: Denominator parameter, positive.
    :type c: float
    :param z: Argument in [0, 1).
    :type z: float
    :raises DomainError: If ``c <= 0`` or ``z`` lies outside [0, 1).
    """

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self) -> None:
        if not self.c > 0.0:
            raise DomainError(f"hypergeometric c must be positive, got {self.c}")
        if not 0.0 <= self.z < 1.0:
            raise DomainError(f"hypergeometric z must lie in [0, 1), got {self.z}")


def hyp2f1(params: HypergeometricParams) -> EvalResult:
    """
    Evaluate F(a, b, c; z) by its power series.

    For z > 0.75 with c - a - b > 0 the Euler transformation
    F(a, b, c; z) = (1 - z)^{c-a-b} F(c-a, c-b, c; z) is applied first.

    :param params: Validated parameters.
    :type params: HypergeometricParams
    :return: Series value with a tail-bound error estimate.
    :rtype: blowuplab.specfun.base.EvalResult
    :raises AccuracyError: If the series has not converged after
        ``MAX_SERIES_TERMS`` terms; carries the partial sum.
    """
    a, b, c, z = params.a, params.b, params.c, params.z
    if z == 0.0:
        return EvalResult(1.0, 0.0)

    excess = c - a - b
    if z > EULER_SWITCH and excess > 0.0:
        prefactor = math.pow(1.0 - z, excess)
        inner = _series(c - a, c - b, c, z)
        return EvalResult(prefactor * inner.value, prefactor * inner.abs_error_estimate)
    return _series(a, b, c, z)


def _series(a: float, b: float, c: float, z: float) -> EvalResult:
    term = 1.0
    total = 1.0
    magnitude_sum = 1.0
    for n in range(MAX_SERIES_TERMS):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        term *= ratio
        total += term
        magnitude_sum += abs(term)
        if term == 0.0:
            return EvalResult(total, MACHINE_EPS * magnitude_sum)
        # Ratios tend to z; the larger of the two bounds the remaining tail.
        tail_ratio = max(abs(ratio), z)
        if abs(term) <= 0.5 * MACHINE_EPS * abs(total) and tail_ratio < 1.0:
            tail = abs(term) * tail_ratio / (1.0 - tail_ratio)
            return EvalResult(total, tail + 2.0 * MACHINE_EPS * magnitude_sum)
    raise AccuracyError(
        f"hypergeometric series not converged after {MAX_SERIES_TERMS} terms "
        f"(a={a}, b={b}, c={c}, z={z})",
        partial_value=total,
    )
