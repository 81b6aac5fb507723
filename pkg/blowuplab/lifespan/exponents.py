"""Closed-form exponents of the lifespan law."""

from __future__ import annotations

import math

from blowuplab.specfun.base import DomainError

CRITICAL_TOLERANCE = 1e-12


class NonCriticalExponentError(ValueError):
    """Raised when p is not the Strauss exponent of the given dimension."""


def gamma_np(dim_n: int, p: float) -> float:
    """γ(N, p) = 2 + (N+1)p - (N-1)p²."""
    return 2.0 + (dim_n + 1) * p - (dim_n - 1) * p * p


def strauss_exponent(dim_n: int) -> float:
    """
    Positive root of (N-1)p² - (N+1)p - 2 = 0.

    :param dim_n: Space dimension, at least 2.
    :type dim_n: int
    :return: p_S(N).
    :rtype: float
    :raises DomainError: If ``dim_n < 2``.
    """
    if dim_n < 2:
        raise DomainError(f"strauss_exponent requires N >= 2, got {dim_n}")
    a = dim_n - 1
    b = dim_n + 1
    return (b + math.sqrt(b * b + 8.0 * a)) / (2.0 * a)


def beta_critical(dim_n: int, p: float) -> float:
    """
    β_p = (N-1)/2 - 1/p, which equals N - (N-1)p/2 only at p = p_S(N).

    :raises NonCriticalExponentError: If the two forms disagree.
    """
    first = (dim_n - 1) / 2.0 - 1.0 / p
    second = dim_n - (dim_n - 1) * p / 2.0
    scale = max(1.0, abs(first), abs(second))
    if abs(first - second) > CRITICAL_TOLERANCE * scale:
        raise NonCriticalExponentError(
            f"p={p} is not critical for N={dim_n}: forms give {first:.12g} and {second:.12g}"
        )
    return first


def predicted_exponent(dim_n: int, p: float) -> float:
    """
    2p(p-1)/γ(N, p), the exponent in T_ε ≲ ε^{-2p(p-1)/γ}.

    :param dim_n: Space dimension.
    :type dim_n: int
    :param p: Power with 1 < p < p_S(N).
    :type p: float
    :return: Positive exponent.
    :rtype: float
    :raises DomainError: Outside the subcritical range.
    """
    if not p > 1.0:
        raise DomainError(f"predicted_exponent requires p > 1, got {p}")
    gamma = gamma_np(dim_n, p)
    if not gamma > 0.0:
        raise DomainError(
            f"p={p} is not subcritical for N={dim_n} (gamma={gamma:.6g}); "
            "the lifespan is exponential there"
        )
    return 2.0 * p * (p - 1.0) / gamma
