"""
The slowly decaying family Φ_β and the light-cone integral.

Φ_β(r, t) = (1/Γ(β)) ∫_0^1 e^{-λt} φ_λ(r) λ^{β-1} dλ solves the linear wave
equation with Dirichlet data on the obstacle, decays like t^{-β} inside the
cone and satisfies ∂_t Φ_β = -β Φ_{β+1}. Its shifted version is
Φ̃_β(r, t) = t_β^β Φ_β(r, t_β + t).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from blowuplab.schema.geometry import ExteriorGeometry, LightConePoint, TestFunctionParams
from blowuplab.schema.profiles import RadialProfile
from blowuplab.specfun.base import DomainError, EvalResult
from blowuplab.specfun.gamma import gamma_fn, regularized_lower_gamma
from blowuplab.specfun.hypergeometric import HypergeometricParams, hyp2f1
from blowuplab.testfam.quadrature import QuadratureResult, adaptive_gauss, gauss_legendre_nodes
from blowuplab.testfam.weights import (
    harmonic_u,
    harmonic_u_array,
    phi_lambda_scaled_array,
    psi1_scaled_array,
    sandwich_margin_array,
)

logger = logging.getLogger(__name__)

# Tail of ∫ e^{-λ(t-r)} λ^{β-1} beyond Λ stays below 1e-16 Γ(β).
_TAIL_DIGITS = 40.0 * math.log(10.0)
T_SHIFT_SEARCH_CAP = 2**16
_PROFILE_PANELS = 16
_PROFILE_ORDER = 15
_BREAK_LOW = -4


class TestFamilyError(ValueError):
    """Raised when a test-function evaluation receives inadmissible input."""

    __test__ = False


class TShiftSearchError(TestFamilyError):
    """Raised when no admissible t_β is found below the search cap."""


def _decay_breakpoints(decay: float, upper: float) -> list[float]:
    """Dyadic points 2^k / decay below ``upper``, starting at 1/(16 decay)."""
    points = []
    lam = 2.0**_BREAK_LOW / decay
    while lam < upper:
        points.append(lam)
        lam *= 2.0
    return points


def _weighted_laplace(
    h: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    beta: float,
    upper: float,
    *,
    decay: float,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
) -> QuadratureResult:
    """
    ∫_0^upper h(λ) λ^{β-1} dλ, with λ = u^{1/β} when β < 1.

    ``h`` carries a factor e^{-λ·decay}; its mass sits near λ ~ 1/decay, which
    the initial panels resolve through dyadic breakpoints.
    """
    breaks = _decay_breakpoints(decay, upper)
    if beta < 1.0:
        inv = 1.0 / beta
        result = adaptive_gauss(
            lambda u: h(u**inv),
            0.0,
            upper**beta,
            abs_tol=abs_tol * beta,
            rel_tol=rel_tol,
            max_subdivisions=max_subdivisions,
            breakpoints=[lam**beta for lam in breaks],
        )
        return QuadratureResult(result.value * inv, result.abs_error * inv, result.n_panels)
    return adaptive_gauss(
        lambda lam: h(lam) * lam ** (beta - 1.0),
        0.0,
        upper,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        max_subdivisions=max_subdivisions,
        breakpoints=breaks,
    )


def phi_beta(
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    point: LightConePoint,
) -> EvalResult:
    """
    Evaluate Φ_β(r, t) by adaptive quadrature in λ.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param params: β and quadrature controls.
    :type params: blowuplab.schema.geometry.TestFunctionParams
    :param point: Point with 1 <= r < t.
    :type point: blowuplab.schema.geometry.LightConePoint
    :return: Φ_β, accurate to ``params.quad_tolerance`` relative to t^{-β} or to |Φ_β|.
    :rtype: blowuplab.specfun.base.EvalResult
    :raises QuadratureAccuracyError: If the panel budget is exhausted.
    """
    beta = params.beta
    r, t = point.r, point.t
    norm = gamma_fn(beta).value

    def integrand(lam: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.exp(-lam * (t - r)) * phi_lambda_scaled_array(geom.nu, lam, r)

    result = _weighted_laplace(
        integrand,
        beta,
        1.0,
        decay=t - r,
        abs_tol=params.quad_tolerance * norm * t ** (-beta),
        rel_tol=params.quad_tolerance,
        max_subdivisions=params.quad_max_subdivisions,
    )
    return EvalResult(result.value / norm, result.abs_error / norm)


def yz_integral(
    geom: ExteriorGeometry,
    beta: float,
    r: float,
    t: float,
    *,
    quad_tolerance: float = 1e-10,
    quad_max_subdivisions: int = 400,
) -> EvalResult:
    """
    (1/Γ(β)) ∫_0^∞ e^{-λt} ψ₁(λr) λ^{β-1} dλ on the whole-space cone 0 <= r < t.

    The integral is truncated at Λ = max(1, (β + 40 ln 10)/(t - r)); the
    dominating bound e^{-λ(t-r)} λ^{β-1} makes the dropped tail negligible.
    It equals t^{-β} F(β/2, (β+1)/2, N/2; r²/t²).

    :raises DomainError: If not ``0 <= r < t``.
    :raises QuadratureAccuracyError: If the panel budget is exhausted.
    """
    if not 0.0 <= r < t:
        raise DomainError(f"yz_integral requires 0 <= r < t, got r={r}, t={t}")
    norm = gamma_fn(beta).value
    cutoff = max(1.0, (beta + _TAIL_DIGITS) / (t - r))

    def integrand(lam: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.exp(-lam * (t - r)) * psi1_scaled_array(geom.nu, lam * r)

    result = _weighted_laplace(
        integrand,
        beta,
        cutoff,
        decay=t - r,
        abs_tol=quad_tolerance * norm * t ** (-beta),
        rel_tol=quad_tolerance,
        max_subdivisions=quad_max_subdivisions,
    )
    return EvalResult(result.value / norm, result.abs_error / norm)


def light_cone_closed_form(geom: ExteriorGeometry, beta: float, r: float, t: float) -> float:
    """t^{-β} F(β/2, (β+1)/2, N/2; r²/t²)."""
    params = HypergeometricParams(beta / 2.0, (beta + 1.0) / 2.0, geom.dim_n / 2.0, (r / t) ** 2)
    return t ** (-beta) * hyp2f1(params).value


def shifted_phi(
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    r: float,
    t: float,
) -> float:
    """
    Φ̃_β(r, t) = t_β^β Φ_β(r, t_β + t).

    :raises DomainError: If ``r >= t_shift + t``.
    """
    if not r < params.t_shift + t:
        raise DomainError(f"shifted_phi requires r < t_shift + t, got r={r}")
    point = LightConePoint(r=r, t=params.t_shift + t)
    return params.t_shift**params.beta * phi_beta(geom, params, point).value


def dt_relation_check(
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    point: LightConePoint,
    h: float,
) -> float:
    """
    |(Φ_β(t+h) - Φ_β(t-h)) / (2h) + β Φ_{β+1}(t)|.

    :raises DomainError: If ``t - h`` leaves the cone.
    """
    if not point.r < point.t - h:
        raise DomainError(f"dt_relation_check needs r < t - h, got {point}, h={h}")
    later = phi_beta(geom, params, LightConePoint(r=point.r, t=point.t + h)).value
    earlier = phi_beta(geom, params, LightConePoint(r=point.r, t=point.t - h)).value
    next_order = phi_beta(geom, params.with_beta(params.beta + 1.0), point).value
    return abs((later - earlier) / (2.0 * h) + params.beta * next_order)


def lower_bound_constant(beta: float) -> float:
    """(1/Γ(β)) ∫_0^1 e^{-μ} μ^{β-1} dμ = P(β, 1)."""
    return regularized_lower_gamma(beta, 1.0).value


def phi_beta_bounds(
    geom: ExteriorGeometry, beta: float, point: LightConePoint
) -> tuple[float, float]:
    """
    Lower bound P(β,1) U t^{-β} and upper-bound shape U t^{-β} F(β/2,(β+1)/2,N/2; r²/t²).

    The lower bound holds without unknown constants for t >= 1.
    """
    u = harmonic_u(geom, point.r)
    scale = u * point.t ** (-beta)
    shape = HypergeometricParams(
        beta / 2.0, (beta + 1.0) / 2.0, geom.dim_n / 2.0, (point.r / point.t) ** 2
    )
    return lower_bound_constant(beta) * scale, scale * hyp2f1(shape).value


@dataclass(frozen=True)
class SandwichScan:
    """Smallest relative lower-bound margin and largest φ_λ / (U ψ₁) ratio on a sample."""

    min_margin: float
    sup_ratio: float
    worst_lambda: float
    worst_r: float


def sandwich_scan(
    geom: ExteriorGeometry,
    lambdas: NDArray[np.float64],
    radii: NDArray[np.float64],
) -> SandwichScan:
    """
    Check U ψ₁(λr) <= φ_λ(r) on a (λ, r) grid and record the empirical C*.

    The ratio is taken over r > 1 only, where U > 0.
    """
    lam_grid, r_grid = np.meshgrid(lambdas, radii, indexing="ij")
    margins = sandwich_margin_array(geom, lam_grid, r_grid)
    worst = np.unravel_index(int(np.argmin(margins)), margins.shape)
    interior = r_grid > 1.0
    u = harmonic_u_array(geom.dim_n, r_grid[interior])
    ratios = 1.0 + margins[interior] / u
    return SandwichScan(
        min_margin=float(margins[worst]),
        sup_ratio=float(np.max(ratios)) if ratios.size else 1.0,
        worst_lambda=float(lam_grid[worst]),
        worst_r=float(r_grid[worst]),
    )


def _profile_nodes(
    profiles: list[RadialProfile],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Composite Gauss nodes covering the union of the profiles' supports."""
    supports = [p.support for p in profiles if p.support is not None]
    if not supports:
        return np.empty(0), np.empty(0)
    a = min(s[0] for s in supports)
    b = max(s[1] for s in supports)
    edges = np.linspace(a, b, _PROFILE_PANELS + 1)
    nodes, weights = zip(
        *(gauss_legendre_nodes(lo, hi, _PROFILE_ORDER) for lo, hi in zip(edges[:-1], edges[1:]))
    )
    return np.concatenate(nodes), np.concatenate(weights)


def harmonic_pairing(geom: ExteriorGeometry, profile: RadialProfile) -> float:
    """|S^{N-1}| ∫ h(r) U(r) r^{N-1} dr by composite Gauss-Legendre."""
    nodes, weights = _profile_nodes([profile])
    if nodes.size == 0:
        return 0.0
    integrand = profile(nodes) * harmonic_u_array(geom.dim_n, nodes) * nodes ** (geom.dim_n - 1)
    return geom.sphere_area * float(np.dot(weights, integrand))


def initial_functional(
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    f_profile: RadialProfile,
    g_profile: RadialProfile,
) -> EvalResult:
    """
    I_β = ∫ g Φ̃_β(·, 0) dx + (β/t_β) ∫ f Φ̃_{β+1}(·, 0) dx
    at the shift ``params.t_shift``.

    Φ̃_{β+1} carries the factor t_β^{β+1}. The radial integral is moved inside
    the λ integral, so only one adaptive quadrature is needed:
    I_β = |S| t_β^β / Γ(β) ∫_0^1 e^{-λ t_β} λ^{β-1} [G_g(λ) + λ G_f(λ)] dλ
    with G_h(λ) = ∫ h φ_λ r^{N-1} dr.
    """
    params.check_shift(geom)
    beta = params.beta
    shift = params.t_shift
    nodes, weights = _profile_nodes([f_profile, g_profile])
    if nodes.size == 0:
        return EvalResult(0.0, 0.0)
    radial_w = weights * nodes ** (geom.dim_n - 1)
    g_w = radial_w * g_profile(nodes)
    f_w = radial_w * f_profile(nodes)
    norm = gamma_fn(beta).value

    def integrand(lam: NDArray[np.float64]) -> NDArray[np.float64]:
        lam_col = lam[:, None]
        kernel = np.exp(-lam_col * (shift - nodes[None, :])) * phi_lambda_scaled_array(
            geom.nu, lam_col, nodes[None, :]
        )
        return kernel @ g_w + lam * (kernel @ f_w)

    mass = float(np.sum(np.abs(g_w)) + np.sum(np.abs(f_w)))
    result = _weighted_laplace(
        integrand,
        beta,
        1.0,
        decay=shift - float(nodes.max()),
        abs_tol=params.quad_tolerance * norm * mass * shift ** (-beta),
        rel_tol=params.quad_tolerance,
        max_subdivisions=params.quad_max_subdivisions,
    )
    factor = geom.sphere_area * shift**beta / norm
    return EvalResult(result.value * factor, result.abs_error * factor)


def select_t_shift(
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    f_profile: RadialProfile,
    g_profile: RadialProfile,
) -> float:
    """
    Smallest t_β in {2r₀, 4r₀, 8r₀, ...} with I_β >= ½ ∫ g U dx.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param params: β and quadrature controls; ``t_shift`` is ignored.
    :type params: blowuplab.schema.geometry.TestFunctionParams
    :param f_profile: Initial displacement profile.
    :type f_profile: blowuplab.schema.profiles.RadialProfile
    :param g_profile: Initial velocity profile.
    :type g_profile: blowuplab.schema.profiles.RadialProfile
    :return: Selected shift.
    :rtype: float
    :raises TestFamilyError: If ∫ g U dx <= 0.
    :raises TShiftSearchError: If the search passes 2^16 r₀.
    """
    half_mass = 0.5 * harmonic_pairing(geom, g_profile)
    if not half_mass > 0.0:
        raise TestFamilyError("t_shift selection requires ∫ g U dx > 0")

    r0 = geom.support_radius_r0
    shift = 2.0 * r0
    while shift <= T_SHIFT_SEARCH_CAP * r0:
        value = initial_functional(
            geom, params.model_copy(update={"t_shift": shift}), f_profile, g_profile
        ).value
        logger.debug("t_shift=%.6g: I_beta=%.6g (target %.6g)", shift, value, half_mass)
        if value >= half_mass:
            return shift
        shift *= 2.0
    raise TShiftSearchError(
        f"no t_shift up to {T_SHIFT_SEARCH_CAP} r0 reaches half of ∫gU; data ill-conditioned"
    )
