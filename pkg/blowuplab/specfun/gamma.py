"""Gamma function, Pochhammer symbols and the regularized lower incomplete gamma."""

from __future__ import annotations

import math

from blowuplab.specfun.base import (
    MACHINE_EPS,
    AccuracyError,
    DomainError,
    EvalResult,
    SpecialFunctionRangeError,
)

_SERIES_MAX_TERMS = 10_000


def gamma_fn(x: float) -> EvalResult:
    """
    Evaluate Γ(x) for positive real ``x``.

    :param x: Positive argument.
    :type x: float
    :return: Γ(x) with a rounding-level error estimate.
    :rtype: blowuplab.specfun.base.EvalResult
    :raises DomainError: If ``x <= 0`` or is not finite.
    :raises SpecialFunctionRangeError: If Γ(x) overflows.
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    try:
        value = math.gamma(x)
    except OverflowError as exc:
        raise SpecialFunctionRangeError(f"Γ({x}) overflows double precision") from exc
    return EvalResult(value, 4.0 * MACHINE_EPS * abs(value))


def pochhammer(d: float, n: int) -> float:
    """
    Rising factorial (d)_n by direct product, with (d)_0 = 1.

    :param d: Base.
    :type d: float
    :param n: Nonnegative number of factors.
    :type n: int
    :return: ∏_{k=1}^{n} (d + k - 1).
    :rtype: float
    :raises DomainError: If ``n`` is negative.
    """
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    result = 1.0
    for k in range(n):
        result *= d + k
    return result


def regularized_lower_gamma(a: float, x: float) -> EvalResult:
    """
    Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).

    Uses the positive series x^a e^{-x} Σ x^k / (a)_{k+1}, which has no
    cancellation and converges for every x.

    :param a: Positive shape parameter.
    :type a: float
    :param x: Nonnegative upper limit.
    :type x: float
    :return: P(a, x) in [0, 1].
    :rtype: blowuplab.specfun.base.EvalResult
    :raises DomainError: If ``a <= 0`` or ``x < 0``.
    :raises AccuracyError: If the series does not settle.
    """
    if a <= 0.0:
        raise DomainError(f"regularized_lower_gamma requires a > 0, got {a}")
    if x < 0.0:
        raise DomainError(f"regularized_lower_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return EvalResult(0.0, 0.0)

    term = 1.0 / a
    total = term
    for k in range(1, _SERIES_MAX_TERMS):
        term *= x / (a + k)
        total += term
        if term < MACHINE_EPS * total:
            break
    else:
        raise AccuracyError(
            f"lower gamma series did not converge for a={a}, x={x}",
            partial_value=total,
        )

    prefactor = math.exp(a * math.log(x) - x - math.lgamma(a))
    value = min(1.0, prefactor * total)
    return EvalResult(value, 8.0 * MACHINE_EPS * value)
