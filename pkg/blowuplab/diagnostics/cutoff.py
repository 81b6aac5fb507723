"""
Smooth time cutoffs and their derivatives.

η(s) = A/(A+B) with A = σ(2-2s), B = σ(2s-1) and σ(x) = exp(-1/x) for x > 0,
σ = 0 otherwise. η = 1 on [0, 1/2], η = 0 on [1, ∞), and all derivatives
are available in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

Array = NDArray[np.float64]


def _sigma(x: Array) -> tuple[Array, Array, Array]:
    """σ, σ' and σ'' on an array, zero where x <= 0."""
    positive = x > 0.0
    safe = np.where(positive, x, 1.0)
    value = np.where(positive, np.exp(-1.0 / safe), 0.0)
    inv = 1.0 / safe
    first = value * inv**2
    second = value * (inv**4 - 2.0 * inv**3)
    return value, first, second


def eta_derivatives(s: ArrayLike) -> tuple[Array, Array, Array]:
    """
    (η, η', η'') at ``s``.

    With S = A + B:
    η' = (A'B - AB') / S² and
    η'' = (A''B - AB'') / S² - 2 (A'B - AB')(A' + B') / S³.
    """
    s = np.asarray(s, dtype=float)
    sa, sa1, sa2 = _sigma(2.0 - 2.0 * s)
    sb, sb1, sb2 = _sigma(2.0 * s - 1.0)
    a, a1, a2 = sa, -2.0 * sa1, 4.0 * sa2
    b, b1, b2 = sb, 2.0 * sb1, 4.0 * sb2
    total = a + b
    cross = a1 * b - a * b1
    eta = a / total
    first = cross / total**2
    second = (a2 * b - a * b2) / total**2 - 2.0 * cross * (a1 + b1) / total**3
    return eta, first, second


def eta(s: ArrayLike) -> Array:
    return eta_derivatives(s)[0]


def eta_star(s: ArrayLike) -> Array:
    """η restricted to [1/2, ∞), zero before."""
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0.5, eta(s), 0.0)


def dual_exponent(p: float) -> float:
    """p' = p / (p - 1)."""
    if not p > 1.0:
        raise ValueError(f"dual exponent needs p > 1, got {p}")
    return p / (p - 1.0)


def cutoff_power(s: ArrayLike, p: float) -> tuple[Array, Array, Array]:
    """
    η^{2p'} and its first two derivatives.

    d/ds η^q = q η^{q-1} η' and
    d²/ds² η^q = q η^{q-2} ((q-1) η'² + η η''), q = 2p'.
    """
    q = 2.0 * dual_exponent(p)
    value, first, second = eta_derivatives(s)
    power = value**q
    d1 = q * value ** (q - 1.0) * first
    d2 = q * value ** (q - 2.0) * ((q - 1.0) * first**2 + value * second)
    return power, d1, d2


@dataclass(frozen=True)
class CutoffSpec:
    """
    η_R(t) = η(t/R), or its starred variant when ``starred`` is set.

    :param scale_R: Scale R > 1.
    :param starred: Zero the cutoff for t < R/2.
    """

    scale_R: float
    starred: bool = False

    def __post_init__(self) -> None:
        if not self.scale_R > 1.0:
            raise ValueError(f"cutoff scale must exceed 1, got {self.scale_R}")

    def _mask(self, t: Array) -> Array:
        if not self.starred:
            return np.ones_like(t)
        return (t >= 0.5 * self.scale_R).astype(float)

    def value(self, t: ArrayLike) -> Array:
        t = np.asarray(t, dtype=float)
        return eta(t / self.scale_R) * self._mask(t)

    def power(self, t: ArrayLike, p: float) -> tuple[Array, Array, Array]:
        """η_R^{2p'} and its t-derivatives (chain rule through t/R)."""
        t = np.asarray(t, dtype=float)
        value, d1, d2 = cutoff_power(t / self.scale_R, p)
        mask = self._mask(t)
        scale = self.scale_R
        return value * mask, d1 * mask / scale, d2 * mask / scale**2
