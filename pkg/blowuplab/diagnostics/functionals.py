"""
Space-time functionals of stored solution histories.

Spatial integrals are |S^{N-1}| ∫ (·) r^{N-1} dr by the trapezoidal rule on
the solver grid; time integrals use the trapezoidal rule over snapshots.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np
from numpy.typing import NDArray

from blowuplab.diagnostics.cutoff import CutoffSpec, cutoff_power, dual_exponent
from blowuplab.schema.geometry import ExteriorGeometry, TestFunctionParams
from blowuplab.schema.records import FunctionalTrace
from blowuplab.testfam.quadrature import adaptive_gauss
from blowuplab.testfam.table import PhiBetaTable
from blowuplab.testfam.weights import harmonic_u_array
from blowuplab.wavesim.solver import SolutionHistory, discrete_harmonic_weight

logger = logging.getLogger(__name__)

# snapshots per cutoff scale needed before a mass is trusted
MIN_SAMPLES_PER_SCALE = 16
Y_TOLERANCE = 1e-8
# inner M(ρ)/ρ integrals resolve three digits below the outer tolerance
_INNER_TOLERANCE = 1e-3 * Y_TOLERANCE
Y_PANEL_BUDGET = 200


class ResolutionError(ValueError):
    """Raised when the stored history is too coarse for the requested scale."""


class MassWeight(StrEnum):
    HARMONIC = "U"
    PHI_BETA = "phi_beta"


def _check_geometry(history: SolutionHistory, geom: ExteriorGeometry) -> None:
    if geom.dim_n != history.grid.dim_n:
        raise ValueError(f"geometry N={geom.dim_n} differs from grid N={history.grid.dim_n}")
    if len(history) == 0:
        raise ValueError("history is empty")


def _space_integral(geom: ExteriorGeometry, r: NDArray, values: NDArray) -> NDArray:
    """|S| ∫ values r^{N-1} dr along the last axis."""
    return geom.sphere_area * np.trapezoid(values * r ** (geom.dim_n - 1), r, axis=-1)


def _trace(name: str, times: NDArray, values: NDArray) -> FunctionalTrace:
    return FunctionalTrace(name=name, times=times.tolist(), values=values.tolist())


def functional_g(
    history: SolutionHistory, geom: ExteriorGeometry, p: float
) -> tuple[FunctionalTrace, FunctionalTrace]:
    """
    G(t) = |S| ∫ ∂ₜu U r^{N-1} dr and its expected derivative |S| ∫ |u|^p U r^{N-1} dr.

    The radial weight is the discrete harmonic weight of the solver grid, so
    the Laplacian term drops out exactly and G is monotone along the scheme.

    :param history: Stored snapshots.
    :type history: blowuplab.wavesim.solver.SolutionHistory
    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param p: Power of the source.
    :type p: float
    :return: Traces ``G`` and ``source``.
    :rtype: tuple[FunctionalTrace, FunctionalTrace]
    """
    _check_geometry(history, geom)
    weight = geom.sphere_area * history.grid.dr * discrete_harmonic_weight(history.grid)
    times = history.times
    g_values = history.ut @ weight
    source = np.abs(history.u) ** p @ weight
    return _trace("G", times, g_values), _trace("source", times, source)


def _phi_table(
    history: SolutionHistory, geom: ExteriorGeometry, params: TestFunctionParams
) -> PhiBetaTable:
    params.check_shift(geom)
    return PhiBetaTable(geom, params.beta, history.radii)


def functional_f_beta(
    history: SolutionHistory,
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    *,
    p: float,
    scale_R: float | None = None,
    table: PhiBetaTable | None = None,
) -> FunctionalTrace:
    """
    F(t) = ∫ ∂ₜu ψ Φ̃_β + (β/t_β) u ψ Φ̃_{β+1} - u ψ' Φ̃_β dx with ψ = η_R^{2p'}.

    Without ``scale_R`` the cutoff is 1. At t = 0 the value is ε I_β.
    """
    _check_geometry(history, geom)
    table = table or _phi_table(history, geom, params)
    times = history.times
    phi, phi_next = table.shifted(times, params.t_shift)
    if scale_R is None:
        psi = np.ones_like(times)
        dpsi = np.zeros_like(times)
    else:
        psi, dpsi, _ = CutoffSpec(scale_R).power(times, p)
    beta, shift = params.beta, params.t_shift
    integrand = (
        history.ut * phi * psi[:, None]
        + (beta / shift) * history.u * phi_next * psi[:, None]
        - history.u * phi * dpsi[:, None]
    )
    values = _space_integral(geom, history.radii, integrand)
    return _trace("F_beta", times, values)


def _check_resolution(times: NDArray, scale_R: float) -> None:
    if times.size < 2:
        raise ResolutionError("at least two snapshots are needed for a time integral")
    spacing = float(np.max(np.diff(times)))
    if spacing > scale_R / MIN_SAMPLES_PER_SCALE:
        raise ResolutionError(
            f"snapshot spacing {spacing:.4g} exceeds R/{MIN_SAMPLES_PER_SCALE} "
            f"for R={scale_R:.4g}; lower the stride"
        )


def weighted_mass(
    history: SolutionHistory,
    geom: ExteriorGeometry,
    p: float,
    scale_R: float,
    *,
    weight: MassWeight = MassWeight.HARMONIC,
    starred: bool = False,
    params: TestFunctionParams | None = None,
    table: PhiBetaTable | None = None,
) -> tuple[float, bool]:
    """
    ∫∫ |u|^p (η_R)^{2p'} W dx dt over the stored history.

    :param history: Stored snapshots.
    :type history: blowuplab.wavesim.solver.SolutionHistory
    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param p: Power p > 1.
    :type p: float
    :param scale_R: Cutoff scale R > 1.
    :type scale_R: float
    :param weight: U or Φ̃_β.
    :type weight: MassWeight
    :param starred: Use η_R* instead of η_R.
    :type starred: bool
    :param params: Family parameters, required for the Φ̃_β weight.
    :type params: blowuplab.schema.geometry.TestFunctionParams | None
    :return: Mass and a flag set when the history ends before t = R.
    :rtype: tuple[float, bool]
    :raises ResolutionError: If snapshots are sparser than R/16.
    """
    _check_geometry(history, geom)
    times = history.times
    _check_resolution(times, scale_R)
    truncated = bool(times[-1] < scale_R)
    inside = times <= scale_R
    t = times[inside]
    u = history.u[inside]
    cutoff, _, _ = CutoffSpec(scale_R, starred).power(t, p)

    if weight is MassWeight.HARMONIC:
        w = harmonic_u_array(geom.dim_n, history.radii)[None, :]
    else:
        if params is None:
            raise ValueError("the Φ̃_β weight needs test-function parameters")
        table = table or _phi_table(history, geom, params)
        w, _ = table.shifted(t, params.t_shift)

    density = _space_integral(geom, history.radii, np.abs(u) ** p * w) * cutoff
    value = float(np.trapezoid(density, t)) if t.size > 1 else 0.0
    if truncated:
        logger.debug("mass at R=%.4g truncated at t=%.4g", scale_R, times[-1])
    return value, truncated


def concentration_mass(
    history: SolutionHistory, geom: ExteriorGeometry, p: float, scale_R: float
) -> tuple[float, bool]:
    """Mass with weight U and η_R*, i.e. over R/2 <= t < R."""
    return weighted_mass(history, geom, p, scale_R, starred=True)


def _phi_mass_density(
    history: SolutionHistory, geom: ExteriorGeometry, params: TestFunctionParams, p: float
) -> NDArray:
    """|S| ∫ |u|^p Φ̃_β r^{N-1} dr at every snapshot."""
    table = _phi_table(history, geom, params)
    phi, _ = table.shifted(history.times, params.t_shift)
    return _space_integral(geom, history.radii, np.abs(history.u) ** p * phi)


def y_aggregate(
    history: SolutionHistory,
    geom: ExteriorGeometry,
    params: TestFunctionParams,
    p: float,
    radii_R: list[float],
) -> FunctionalTrace:
    """
    Y(R) = ∫_0^R M(ρ) ρ^{-1} dρ with M(ρ) the Φ̃_β mass under η_ρ*.

    With t = ρs, M(ρ)/ρ = ∫_{1/2}^1 D(ρs) η(s)^{2p'} ds where D is the
    spatial mass density, linear between snapshots and zero after the last
    one. Both integrals are adaptive, so Y does not depend on ``radii_R``
    beyond where it is sampled.

    :param history: Stored snapshots.
    :type history: blowuplab.wavesim.solver.SolutionHistory
    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param params: Family parameters with the shift t_β.
    :type params: blowuplab.schema.geometry.TestFunctionParams
    :param p: Power p > 1.
    :type p: float
    :param radii_R: Strictly increasing scales R > 1.
    :type radii_R: list[float]
    :return: Trace ``Y`` indexed by R.
    :rtype: blowuplab.schema.records.FunctionalTrace
    :raises ResolutionError: If snapshots are sparser than R₀/16 for the first scale.
    """
    scales = np.asarray(radii_R, dtype=float)
    if scales.size == 0 or np.any(np.diff(scales) <= 0.0):
        raise ValueError("radii_R must be nonempty and strictly increasing")
    _check_geometry(history, geom)
    times = history.times
    _check_resolution(times, float(scales[0]))
    density = _phi_mass_density(history, geom, params, p)
    peak = float(np.max(np.abs(density)))
    if times[-1] < scales[-1]:
        logger.debug("Y(R) for R > %.4g uses a truncated history", times[-1])

    def scaled_mass(rho: float) -> float:
        kinks = times[(times > 0.5 * rho) & (times < rho)] / rho
        return adaptive_gauss(
            lambda s: np.interp(rho * s, times, density, right=0.0) * cutoff_power(s, p)[0],
            0.5,
            1.0,
            abs_tol=_INNER_TOLERANCE * peak,
            rel_tol=_INNER_TOLERANCE,
            max_subdivisions=kinks.size + Y_PANEL_BUDGET,
            breakpoints=kinks,
        ).value

    def outer(rhos: NDArray) -> NDArray:
        return np.array([scaled_mass(float(rho)) for rho in rhos])

    edges = np.concatenate([[0.0], scales])
    pieces = [
        adaptive_gauss(
            outer,
            float(lo),
            float(hi),
            abs_tol=Y_TOLERANCE * peak * (hi - lo),
            rel_tol=Y_TOLERANCE,
            max_subdivisions=Y_PANEL_BUDGET,
        ).value
        for lo, hi in zip(edges[:-1], edges[1:])
    ]
    return _trace("Y", scales, np.cumsum(pieces))


@dataclass(frozen=True)
class IdentityBalance:
    """Both sides of the time-integrated identity on a window."""

    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs


def tfm_residual(
    history: SolutionHistory,
    geom: ExteriorGeometry,
    p: float,
    scale_R: float,
    window: tuple[float, float],
) -> IdentityBalance:
    """
    Balance of ∫∫ |u|^p Ψ = [∫ (∂ₜu Ψ - u ∂ₜΨ) dx] + ∫∫ u ∂ₜ²Ψ with Ψ = η_R^{2p'} U.

    ΔU = 0, so the ΔΨ term vanishes. The window is cut to the snapshots it
    contains.

    :raises ValueError: If fewer than two snapshots lie in the window.
    """
    _check_geometry(history, geom)
    dual_exponent(p)
    times = history.times
    inside = (times >= window[0]) & (times <= window[1])
    if np.count_nonzero(inside) < 2:
        raise ValueError(f"window {window} holds fewer than two snapshots")
    t = times[inside]
    u = history.u[inside]
    ut = history.ut[inside]
    r = history.radii
    weight = harmonic_u_array(geom.dim_n, r)[None, :]
    psi, dpsi, d2psi = CutoffSpec(scale_R).power(t, p)

    source = _space_integral(geom, r, np.abs(u) ** p * weight) * psi
    lhs = float(np.trapezoid(source, t))
    boundary = _space_integral(geom, r, (ut * psi[:, None] - u * dpsi[:, None]) * weight)
    bulk = _space_integral(geom, r, u * weight) * d2psi
    rhs = float(boundary[-1] - boundary[0] + np.trapezoid(bulk, t))
    return IdentityBalance(lhs=lhs, rhs=rhs)
