"""
Radial weights of the exterior problem: U, ψ₁, ψ₂ and the eigenfunctions φ_λ.

With C_ν = 2^ν Γ(ν+1):

- ψ₁(z) = C_ν z^{-ν} I_ν(z), continuous at 0 with ψ₁(0) = 1;
- ψ₂(z) = C_ν z^{-ν} K_ν(z);
- φ_λ(r) = ψ₁(λr) - ψ₁(λ) ψ₂(λr) / ψ₂(λ), so φ_λ(1) = 0 and λ²φ_λ = Δφ_λ.

φ_λ is evaluated through exponentially scaled Bessel values:
e^{-λr} φ_λ(r) = Ψ(λr) - Ψ(λ) r^{-ν} (K̂(λr) / K̂(λ)) e^{-2λ(r-1)},
where Ψ(z) = e^{-z} ψ₁(z) and K̂(z) = e^{z} K_ν(z).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.specfun.base import MACHINE_EPS, AccuracyError, DomainError
from blowuplab.specfun.bessel import i_scaled_array, k_scaled_array, series_limit

_PSI1_SERIES_MAX_TERMS = 500


def _normalization(nu: float) -> float:
    return 2.0**nu * math.gamma(nu + 1.0)


def harmonic_u(geom: ExteriorGeometry, r: float) -> float:
    """
    U(r) = 1 - r^{2-N}, the harmonic weight vanishing on the obstacle.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param r: Radius, ``r >= 1``.
    :type r: float
    :return: Value in [0, 1).
    :rtype: float
    :raises DomainError: If ``r < 1``.
    """
    if r < 1.0:
        raise DomainError(f"harmonic_u requires r >= 1, got {r}")
    return 1.0 - r ** (2 - geom.dim_n)


def harmonic_u_array(dim_n: int, r: ArrayLike) -> NDArray[np.float64]:
    """Vectorized U without domain checks."""
    return 1.0 - np.asarray(r, dtype=float) ** (2 - dim_n)


def psi1_scaled_array(nu: float, z: ArrayLike) -> NDArray[np.float64]:
    """
    e^{-z} ψ₁(z) for z >= 0.

    Small arguments sum ψ₁ = Σ_k (z²/4)^k Γ(ν+1) / (k! Γ(ν+k+1)) directly.
    """
    x = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(x < 0.0):
        raise DomainError("psi1 requires z >= 0")
    out = np.empty_like(x)

    small = x <= series_limit(nu)
    if small.any():
        xs = x[small]
        quarter = 0.25 * xs * xs
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        for k in range(1, _PSI1_SERIES_MAX_TERMS):
            term = term * quarter / (k * (nu + k))
            total = total + term
            if np.all(term <= MACHINE_EPS * total):
                break
        else:
            raise AccuracyError("psi1 series did not converge", partial_value=float(total[0]))
        out[small] = total * np.exp(-xs)

    if (~small).any():
        xl = x[~small]
        out[~small] = _normalization(nu) * xl ** (-nu) * i_scaled_array(nu, xl)
    return out


def psi1(geom: ExteriorGeometry, z: float) -> float:
    """
    ψ₁(z) = 2^ν Γ(ν+1) z^{-ν} I_ν(z), with ψ₁(0) = 1.

    :raises DomainError: If ``z < 0``.
    """
    return float(psi1_scaled_array(geom.nu, z)[0]) * math.exp(z)


def psi2(geom: ExteriorGeometry, z: float) -> float:
    """
    ψ₂(z) = 2^ν Γ(ν+1) z^{-ν} K_ν(z).

    For N = 3 this is (π/2) e^{-z} / z.

    :raises DomainError: If ``z <= 0``.
    """
    if z <= 0.0:
        raise DomainError(f"psi2 requires z > 0, got {z}")
    nu = geom.nu
    k_scaled = float(k_scaled_array(nu, z)[0])
    return _normalization(nu) * z ** (-nu) * k_scaled * math.exp(-z)


def phi_lambda_scaled_array(nu: float, lam: ArrayLike, r: ArrayLike) -> NDArray[np.float64]:
    """
    e^{-λr} φ_λ(r), broadcasting ``lam`` against ``r``.

    Exactly zero at r = 1.
    """
    lam_arr, r_arr = np.broadcast_arrays(
        np.asarray(lam, dtype=float), np.asarray(r, dtype=float)
    )
    shape = lam_arr.shape
    lam_flat = lam_arr.ravel()
    r_flat = r_arr.ravel()
    if np.any(lam_flat <= 0.0):
        raise DomainError("phi_lambda requires lambda > 0")
    if np.any(r_flat < 1.0):
        raise DomainError("phi_lambda requires r >= 1")

    z = lam_flat * r_flat
    ratio = k_scaled_array(nu, z) / k_scaled_array(nu, lam_flat)
    out = psi1_scaled_array(nu, z) - psi1_scaled_array(nu, lam_flat) * r_flat ** (
        -nu
    ) * ratio * np.exp(-2.0 * lam_flat * (r_flat - 1.0))
    out = np.where(r_flat == 1.0, 0.0, out)
    return out.reshape(shape)


def phi_lambda(geom: ExteriorGeometry, lam: float, r: float) -> float:
    """
    φ_λ(r) = ψ₁(λr) - (I_ν(λ)/K_ν(λ)) ψ₂(λr) with the ψ₂ normalization above.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param lam: Spectral parameter λ > 0.
    :type lam: float
    :param r: Radius, ``r >= 1``.
    :type r: float
    :return: φ_λ(r), zero at r = 1 and positive beyond.
    :rtype: float
    :raises DomainError: If ``lam <= 0`` or ``r < 1``.
    """
    scaled = float(phi_lambda_scaled_array(geom.nu, lam, r).reshape(-1)[0])
    return scaled * math.exp(lam * r)


def sandwich_margin_array(
    geom: ExteriorGeometry, lam: ArrayLike, r: ArrayLike
) -> NDArray[np.float64]:
    """(φ_λ(r) - U(r) ψ₁(λr)) / ψ₁(λr): nonnegative by the comparison bound."""
    lam_arr, r_arr = np.broadcast_arrays(
        np.asarray(lam, dtype=float), np.asarray(r, dtype=float)
    )
    phi_s = phi_lambda_scaled_array(geom.nu, lam_arr, r_arr)
    psi_s = psi1_scaled_array(geom.nu, (lam_arr * r_arr).ravel()).reshape(lam_arr.shape)
    return phi_s / psi_s - harmonic_u_array(geom.dim_n, r_arr)


def verify_eigen_equation(geom: ExteriorGeometry, lam: float, r: float, h: float) -> float:
    """
    Centered-difference residual |λ²φ_λ - φ_λ'' - (N-1)/r φ_λ'| at r.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param lam: Spectral parameter λ > 0.
    :type lam: float
    :param r: Radius with ``r > 1 + 2h``.
    :type r: float
    :param h: Difference step.
    :type h: float
    :return: Absolute residual; second order in ``h``.
    :rtype: float
    :raises DomainError: If the stencil would leave the domain.
    """
    if not r > 1.0 + 2.0 * h:
        raise DomainError(f"verify_eigen_equation requires r > 1 + 2h, got r={r}, h={h}")
    radii = np.array([r - h, r, r + h])
    values = phi_lambda_scaled_array(geom.nu, lam, radii) * np.exp(lam * radii)
    minus, centre, plus = (float(v) for v in values)
    second = (plus - 2.0 * centre + minus) / (h * h)
    first = (plus - minus) / (2.0 * h)
    return abs(lam * lam * centre - second - (geom.dim_n - 1) / r * first)
