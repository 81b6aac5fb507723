"""Φ_β and Φ_{β+1} on a fixed radial array for many times at once."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.testfam.quadrature import GAUSS_ORDER
from blowuplab.testfam.weights import phi_lambda_scaled_array

DEFAULT_LEVELS = 40


def _dyadic_rule(beta: float, levels: int) -> tuple[NDArray, NDArray]:
    """
    Nodes/weights for ∫_0^1 h(λ) λ^{β-1} dλ on panels [2^{-k-1}, 2^{-k}].

    The remaining sliver [0, 2^{-levels}] gets one node at its midpoint with
    the exact weight of λ^{β-1}.
    """
    x, w = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    nodes = []
    weights = []
    for k in range(levels):
        hi = 2.0**-k
        lo = 0.5 * hi
        half = 0.5 * (hi - lo)
        lam = 0.5 * (hi + lo) + half * x
        nodes.append(lam)
        weights.append(half * w * lam ** (beta - 1.0))
    sliver = 2.0**-levels
    nodes.append(np.array([0.5 * sliver]))
    weights.append(np.array([sliver**beta / beta]))
    return np.concatenate(nodes), np.concatenate(weights)


class PhiBetaTable:
    """
    Φ_β(r, t) for every radius of a fixed grid, driven by one λ rule.

    φ_λ(r) is evaluated once per (λ node, radius); each time then costs one
    weighted sum. Agrees with :func:`blowuplab.testfam.family.phi_beta` to
    about 1e-6 relative inside the cone.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param beta: Exponent β > 0.
    :type beta: float
    :param radii: Radii r >= 1.
    :type radii: numpy.typing.ArrayLike
    :param levels: Number of dyadic λ panels.
    :type levels: int
    """

    def __init__(
        self,
        geom: ExteriorGeometry,
        beta: float,
        radii: ArrayLike,
        *,
        levels: int = DEFAULT_LEVELS,
    ) -> None:
        if beta <= 0.0:
            raise ValueError(f"beta must be positive, got {beta}")
        self.geom = geom
        self.beta = beta
        self.radii = np.asarray(radii, dtype=float)
        self._lam, self._weights = _dyadic_rule(beta, levels)
        self._phi_scaled = np.vstack(
            [phi_lambda_scaled_array(geom.nu, lam, self.radii) for lam in self._lam]
        )

    def _moments(self, times: ArrayLike) -> tuple[NDArray, NDArray]:
        t = np.atleast_1d(np.asarray(times, dtype=float))
        zeroth = np.empty((t.size, self.radii.size))
        first = np.empty_like(zeroth)
        for i, time in enumerate(t):
            # e^{-λt} φ_λ(r) = e^{-λ(t-r)} e^{-λr} φ_λ(r)
            kernel = np.exp(-np.outer(self._lam, time - self.radii)) * self._phi_scaled
            zeroth[i] = self._weights @ kernel
            first[i] = (self._weights * self._lam) @ kernel
        return zeroth, first

    def values(self, times: ArrayLike) -> tuple[NDArray, NDArray]:
        """
        (Φ_β, Φ_{β+1}) with shape (n_times, n_radii).
        """
        zeroth, first = self._moments(times)
        return zeroth / math.gamma(self.beta), first / math.gamma(self.beta + 1.0)

    def shifted(self, times: ArrayLike, t_shift: float) -> tuple[NDArray, NDArray]:
        """
        (Φ̃_β, Φ̃_{β+1}) = (t_β^β Φ_β, t_β^{β+1} Φ_{β+1}) at t_β + t.
        """
        t = np.atleast_1d(np.asarray(times, dtype=float))
        phi, phi_next = self.values(t + t_shift)
        return t_shift**self.beta * phi, t_shift ** (self.beta + 1.0) * phi_next
