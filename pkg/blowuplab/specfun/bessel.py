"""
Modified Bessel functions I_ν and K_ν of real order ν >= 0 and positive argument.

Scaled values e^{-z} I_ν(z) and e^{z} K_ν(z) are the primary outputs; the
unscaled wrappers multiply the exponential back in and refuse to overflow.

Evaluation strategy, per argument:

- I_ν by its ascending power series for z <= max(12, 2ν).
- Both functions by Temme's series (z < 2) or Steed's continued fraction
  (z >= 2) for the order μ = ν - round(ν) in [-1/2, 1/2), with I obtained
  from the continued fraction for I'_ν / I_ν and the Wronskian, and K
  carried to order ν by forward recurrence.
- The Hankel asymptotic expansion for z >= max(60, ν²).

The array helpers (``*_array``) are vectorized over ``z`` and are what the
test-function layer calls; the scalar functions wrap them in ``EvalResult``.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from blowuplab.specfun.base import (
    MACHINE_EPS,
    AccuracyError,
    DomainError,
    EvalResult,
    SpecialFunctionRangeError,
)


_MAX_ITERATIONS = 10_000
_TINY = 1e-300
_TEMME_SWITCH = 2.0
_ROUNDING_ULPS = 16.0
_EXP_OVERFLOW = math.log(np.finfo(float).max)

# Taylor coefficients of 1/Γ(z) = Σ_{k>=1} c_k z^k (c_1 = 1).
_RECIP_GAMMA_COEFFS = (
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
)


def series_limit(nu: float) -> float:
    """Largest argument handled by the ascending series for I_ν."""
    return max(12.0, 2.0 * nu)


def asymptotic_limit(nu: float) -> float:
    """Smallest argument handled by the large-z asymptotic expansions."""
    return max(60.0, nu * nu)


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """Return (gam1, gam2, 1/Γ(1+μ), 1/Γ(1-μ)) for |μ| <= 1/2."""
    gampl = 1.0 / math.gamma(1.0 + mu)
    gammi = 1.0 / math.gamma(1.0 - mu)
    if abs(mu) < 0.01:
        c = _RECIP_GAMMA_COEFFS
        mu2 = mu * mu
        gam1 = -(c[1] + mu2 * (c[3] + mu2 * (c[5] + mu2 * (c[7] + mu2 * c[9]))))
        gam2 = 1.0 + mu2 * (c[2] + mu2 * (c[4] + mu2 * (c[6] + mu2 * c[8])))
    else:
        gam1 = (gammi - gampl) / (2.0 * mu)
        gam2 = 0.5 * (gammi + gampl)
    return gam1, gam2, gampl, gammi


def _cf1_ratio(nu: float, x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Continued fraction for I'_ν(x) / I_ν(x) by modified Lentz iteration."""
    xi2 = 2.0 / x
    h = np.maximum(nu / x, _TINY)
    b = xi2 * nu
    d = np.zeros_like(x)
    c = h.copy()
    active = np.ones(x.shape, dtype=bool)
    for _ in range(_MAX_ITERATIONS):
        b = b + xi2
        d_new = 1.0 / (b + d)
        c_new = b + 1.0 / c
        delta = c_new * d_new
        h = np.where(active, h * delta, h)
        d = np.where(active, d_new, d)
        c = np.where(active, c_new, c)
        active &= np.abs(delta - 1.0) >= MACHINE_EPS
        if not active.any():
            return h
    raise AccuracyError(
        f"Bessel CF1 did not converge for order {nu}",
        partial_value=float(h.flat[0]),
    )


def _temme_k(mu: float, x: NDArray[np.float64]) -> tuple[NDArray, NDArray, NDArray]:
    """Unscaled K_μ(x), K_{μ+1}(x) for 0 < x < 2 and the last relative increment."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < MACHINE_EPS else pimu / math.sin(pimu)
    d = -np.log(x2)
    e = mu * d
    safe_e = np.where(e == 0.0, 1.0, e)
    fact2 = np.where(np.abs(e) < MACHINE_EPS, 1.0, np.sinh(e) / safe_e)
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = fact * (gam1 * np.cosh(e) + gam2 * fact2 * d)
    total = ff.copy()
    e = np.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = np.ones_like(x)
    dd = x2 * x2
    sum1 = p.copy()
    mu2 = mu * mu
    for i in range(1, _MAX_ITERATIONS):
        ff = (i * ff + p + q) / (i * i - mu2)
        c = c * dd / i
        p = p / (i - mu)
        q = q / (i + mu)
        delta = c * ff
        total = total + delta
        sum1 = sum1 + c * (p - i * ff)
        if np.all(np.abs(delta) < np.abs(total) * MACHINE_EPS):
            return total, sum1 * (2.0 / x), np.abs(delta) / np.abs(total)
    raise AccuracyError(
        f"Temme series did not converge for order {mu}",
        partial_value=float(total.flat[0]),
    )


def _steed_k_scaled(mu: float, x: NDArray[np.float64]) -> tuple[NDArray, NDArray, NDArray]:
    """
    Scaled e^x K_μ(x), e^x K_{μ+1}(x) for x >= 2 by Steed's continued fraction,
    with the last relative increment of the sum.
    """
    mu2 = mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25 - mu2
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAX_ITERATIONS):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) < np.abs(s) * MACHINE_EPS):
            h = a1 * h
            kmu = np.sqrt(math.pi / (2.0 * x)) / s
            k1 = kmu * (mu + x + 0.5 - h) / x
            return kmu, k1, np.abs(dels) / np.abs(s)
    raise AccuracyError(
        f"Steed continued fraction did not converge for order {mu}",
        partial_value=float(s.flat[0]),
    )


def _recurrence_ik_scaled(
    nu: float, x: NDArray[np.float64]
) -> tuple[NDArray, NDArray, NDArray]:
    """Scaled (I_ν, K_ν) from CF1, Temme/Steed and the Wronskian, with their truncation."""
    nl = int(nu + 0.5)
    mu = nu - nl
    h = _cf1_ratio(nu, x)

    # Downward recurrence from an arbitrary start gives I'/I at order μ.
    ril = np.full_like(x, _TINY)
    ripl = h * ril
    ril_start = ril.copy()
    fact = nu / x
    for _ in range(nl):
        ritemp = fact * ril + ripl
        fact = fact - 1.0 / x
        ripl = fact * ritemp + ril
        ril = ritemp
    ratio_mu = ripl / ril

    kmu = np.empty_like(x)
    k1 = np.empty_like(x)
    truncation = np.empty_like(x)
    small = x < _TEMME_SWITCH
    if small.any():
        xs = x[small]
        k_lo, k_hi, truncation[small] = _temme_k(mu, xs)
        scale = np.exp(xs)
        kmu[small] = k_lo * scale
        k1[small] = k_hi * scale
    if (~small).any():
        kmu[~small], k1[~small], truncation[~small] = _steed_k_scaled(mu, x[~small])

    kmu_prime = mu / x * kmu - k1
    imu = (1.0 / x) / (ratio_mu * kmu - kmu_prime)
    i_nu = imu * ril_start / ril

    for i in range(1, nl + 1):
        ktemp = (mu + i) * (2.0 / x) * k1 + kmu
        kmu = k1
        k1 = ktemp
    # CF1 stops once its increment is below one ulp
    return i_nu, kmu, truncation + MACHINE_EPS


def _ascending_i_scaled(nu: float, x: NDArray[np.float64]) -> tuple[NDArray, NDArray]:
    """
    e^{-x} I_ν(x) from the ascending power series.

    The error is the last term kept plus the rounding of the exponent of the
    leading term, which grows with x.
    """
    quarter = 0.25 * x * x
    exponent = nu * np.log(0.5 * x) - math.lgamma(nu + 1.0) - x
    term = np.exp(exponent)
    total = term.copy()
    for k in range(1, _MAX_ITERATIONS):
        term = term * quarter / (k * (nu + k))
        total = total + term
        if np.all(term <= MACHINE_EPS * total):
            exponent_size = np.abs(nu * np.log(0.5 * x)) + abs(math.lgamma(nu + 1.0)) + x
            return total, term / total + MACHINE_EPS * exponent_size
    raise AccuracyError(
        f"ascending I series did not converge for order {nu}",
        partial_value=float(total.flat[0]),
    )


def _asymptotic_ik_scaled(
    nu: float, x: NDArray[np.float64]
) -> tuple[NDArray, NDArray, NDArray]:
    """
    Hankel expansions for scaled (I_ν, K_ν); the e^{-2x} part of I is dropped.

    The omitted tail is bounded by the last term kept, relative to the smaller sum.
    """
    four_nu2 = 4.0 * nu * nu
    term = np.ones_like(x)
    sum_i = np.ones_like(x)
    sum_k = np.ones_like(x)
    previous = np.full_like(x, np.inf)
    last = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        term = term * (four_nu2 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        magnitude = np.abs(term)
        # Stop each element at its smallest term.
        active &= magnitude < previous
        sum_i = np.where(active, sum_i + (-1) ** k * term, sum_i)
        sum_k = np.where(active, sum_k + term, sum_k)
        last = np.where(active, magnitude, last)
        active &= magnitude > MACHINE_EPS * np.abs(sum_k)
        previous = magnitude
        if not active.any():
            break
    i_scaled = sum_i / np.sqrt(2.0 * math.pi * x)
    k_scaled = sum_k * np.sqrt(math.pi / (2.0 * x))
    truncation = last / np.minimum(np.abs(sum_i), np.abs(sum_k))
    return i_scaled, k_scaled, truncation


def _prepare(nu: float, z: ArrayLike) -> NDArray[np.float64]:
    if not nu >= 0.0:
        raise DomainError(f"Bessel order must be >= 0, got {nu}")
    x = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(x > 0.0):
        raise DomainError("modified Bessel functions require z > 0")
    return x


def _ik_scaled_with_error(
    nu: float, x: NDArray[np.float64]
) -> tuple[NDArray, NDArray, NDArray, NDArray]:
    """Scaled (I_ν, K_ν) and their relative error estimates on validated ``x``."""
    i_out = np.empty_like(x)
    k_out = np.empty_like(x)
    truncation = np.empty_like(x)

    large = x >= asymptotic_limit(nu)
    middle = ~large
    if large.any():
        i_out[large], k_out[large], truncation[large] = _asymptotic_ik_scaled(nu, x[large])
    if middle.any():
        i_out[middle], k_out[middle], truncation[middle] = _recurrence_ik_scaled(nu, x[middle])

    # order recurrences add a few ulps per step
    rounding = _ROUNDING_ULPS * MACHINE_EPS * (int(nu + 0.5) + 1)
    rel_i = truncation + rounding
    rel_k = truncation + rounding
    series = x <= series_limit(nu)
    if series.any():
        i_out[series], series_error = _ascending_i_scaled(nu, x[series])
        rel_i[series] = series_error + _ROUNDING_ULPS * MACHINE_EPS
    return i_out, k_out, rel_i, rel_k


def ik_scaled_array(nu: float, z: ArrayLike) -> tuple[NDArray, NDArray]:
    """
    Vectorized scaled pair (e^{-z} I_ν(z), e^{z} K_ν(z)).

    :param nu: Nonnegative order.
    :type nu: float
    :param z: Positive arguments.
    :type z: numpy.typing.ArrayLike
    :return: Arrays of scaled I and K values, shaped like ``z`` (at least 1-D).
    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    :raises DomainError: If ``nu < 0`` or any ``z <= 0``.
    """
    i_out, k_out, _, _ = _ik_scaled_with_error(nu, _prepare(nu, z))
    return i_out, k_out


def i_scaled_array(nu: float, z: ArrayLike) -> NDArray[np.float64]:
    """Vectorized e^{-z} I_ν(z)."""
    x = _prepare(nu, z)
    out = np.empty_like(x)
    series = x <= series_limit(nu)
    if series.any():
        out[series] = _ascending_i_scaled(nu, x[series])[0]
    if (~series).any():
        out[~series] = ik_scaled_array(nu, x[~series])[0]
    return out


def k_scaled_array(nu: float, z: ArrayLike) -> NDArray[np.float64]:
    """Vectorized e^{z} K_ν(z); negative orders use K_{-ν} = K_ν."""
    nu = abs(nu)
    x = _prepare(nu, z)
    out = np.empty_like(x)
    large = x >= asymptotic_limit(nu)
    if large.any():
        out[large] = _asymptotic_ik_scaled(nu, x[large])[1]
    if (~large).any():
        out[~large] = _recurrence_ik_scaled(nu, x[~large])[1]
    return out


def bessel_i_scaled(order: float, z: float) -> EvalResult:
    """
    Evaluate e^{-z} I_ν(z).

    :param order: Nonnegative order ν.
    :type order: float
    :param z: Positive argument.
    :type z: float
    :return: Scaled value, strictly positive, with the truncation-based error.
    :rtype: blowuplab.specfun.base.EvalResult
    :raises DomainError: If ``z <= 0`` or ``order < 0``.
    """
    return bessel_ik_scaled(order, z)[0]


def bessel_k_scaled(order: float, z: float) -> EvalResult:
    """
    Evaluate e^{z} K_ν(z); the order enters through |ν|.

    :param order: Real order ν.
    :type order: float
    :param z: Positive argument.
    :type z: float
    :return: Scaled value, strictly positive, with the truncation-based error.
    :rtype: blowuplab.specfun.base.EvalResult
    :raises DomainError: If ``z <= 0``.
    """
    return bessel_ik_scaled(abs(order), z)[1]


def bessel_ik_scaled(order: float, z: float) -> tuple[EvalResult, EvalResult]:
    """Both scaled values from a single evaluation."""
    i_arr, k_arr, rel_i, rel_k = _ik_scaled_with_error(order, _prepare(order, z))
    i_val = float(i_arr[0])
    k_val = float(k_arr[0])
    i_result = EvalResult(i_val, float(rel_i[0]) * i_val)
    return i_result, EvalResult(k_val, float(rel_k[0]) * k_val)


def bessel_i(order: float, z: float) -> EvalResult:
    """
    Evaluate I_ν(z) = e^{z} · bessel_i_scaled.

    :raises DomainError: If ``z <= 0``.
    :raises SpecialFunctionRangeError: If e^{z} overflows; use the scaled variant.
    """
    if z > _EXP_OVERFLOW:
        raise SpecialFunctionRangeError(
            f"I_ν({z}) overflows double precision; use bessel_i_scaled instead"
        )
    scaled = bessel_i_scaled(order, z)
    factor = math.exp(z)
    value = scaled.value * factor
    if not math.isfinite(value):
        raise SpecialFunctionRangeError(
            f"I_ν({z}) overflows double precision; use bessel_i_scaled instead"
        )
    return EvalResult(value, scaled.abs_error_estimate * factor)


def bessel_k(order: float, z: float) -> EvalResult:
    """
    Evaluate K_ν(z) = e^{-z} · bessel_k_scaled.

    :raises DomainError: If ``z <= 0``.
    """
    scaled = bessel_k_scaled(order, z)
    factor = math.exp(-z)
    return EvalResult(scaled.value * factor, scaled.abs_error_estimate * factor)
