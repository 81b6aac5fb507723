"""Log-log scaling probes over the cutoff scale R."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from blowuplab.diagnostics.cutoff import dual_exponent
from blowuplab.diagnostics.functionals import concentration_mass
from blowuplab.lifespan.exponents import gamma_np
from blowuplab.lifespan.fit import InsufficientDataError
from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.specfun.base import DomainError
from blowuplab.testfam.quadrature import adaptive_gauss
from blowuplab.wavesim.solver import SolutionHistory

logger = logging.getLogger(__name__)

VOLUME_SLOPE_TOLERANCE = 0.1


@dataclass(frozen=True)
class ScalingProbe:
    """Masses per scale with the fitted and expected log-log slopes."""

    scales: tuple[float, ...]
    masses: tuple[float, ...]
    slope: float
    expected_slope: float

    @property
    def within_tolerance(self) -> bool:
        return abs(self.slope - self.expected_slope) <= VOLUME_SLOPE_TOLERANCE


def _loglog_slope(scales: Sequence[float], masses: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(scales), np.log(masses), 1)
    return float(slope)


def _truncated_cone_volume(geom: ExteriorGeometry, rho: float) -> float:
    """|S| ∫_1^ρ U(r) r^{N-1} dr = |S| [(ρ^N - 1)/N - (ρ² - 1)/2]."""
    n = geom.dim_n
    return geom.sphere_area * ((rho**n - 1.0) / n - (rho**2 - 1.0) / 2.0)


def volume_scaling_probe(
    geom: ExteriorGeometry,
    p: float,
    scales: Sequence[float],
    *,
    weight_scale: float = 1.0,
) -> ScalingProbe:
    """
    R^{-2p'} ∫_0^R ∫_{Ω(t)} w U dx dt for each R, Ω(t) = {1 < |x| < R₀ + t}.

    The fitted slope should be N + 1 - 2p'.

    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :param p: Subcritical power.
    :type p: float
    :param scales: At least three cutoff scales R.
    :type scales: collections.abc.Sequence[float]
    :param weight_scale: Constant factor w multiplying U.
    :type weight_scale: float
    :return: Probe summary.
    :rtype: ScalingProbe
    :raises InsufficientDataError: With fewer than three scales.
    :raises DomainError: If p is not subcritical.
    """
    if len(scales) < 3:
        raise InsufficientDataError(f"need 3 scales, got {len(scales)}")
    if not p > 1.0 or gamma_np(geom.dim_n, p) <= 0.0:
        raise DomainError(f"volume probe needs subcritical p, got p={p} for N={geom.dim_n}")
    dual = dual_exponent(p)
    r0 = geom.support_radius_r0

    def inner(t: np.ndarray) -> np.ndarray:
        return np.array([_truncated_cone_volume(geom, r0 + s) for s in t])

    masses = []
    for scale in scales:
        total = adaptive_gauss(inner, 0.0, scale, abs_tol=1e-10 * scale ** (geom.dim_n + 1))
        masses.append(weight_scale * total.value * scale ** (-2.0 * dual))
    slope = _loglog_slope(scales, masses)
    expected = geom.dim_n + 1.0 - 2.0 * dual
    logger.info("volume probe slope %.4f (expected %.4f)", slope, expected)
    return ScalingProbe(tuple(map(float, scales)), tuple(masses), slope, expected)


def concentration_probe(
    history: SolutionHistory, geom: ExteriorGeometry, p: float, scales: Sequence[float]
) -> ScalingProbe:
    """
    Concentration masses over R/2 <= t < R and their log-log slope.

    Reported against N - (N-1)p/2 without an acceptance threshold. Scales with
    a truncated or vanishing mass are skipped.
    """
    kept: list[float] = []
    masses: list[float] = []
    for scale in scales:
        mass, truncated = concentration_mass(history, geom, p, scale)
        if truncated or not mass > 0.0:
            logger.debug("concentration scale R=%.4g skipped", scale)
            continue
        kept.append(float(scale))
        masses.append(mass)
    if len(kept) < 3:
        raise InsufficientDataError(f"only {len(kept)} usable concentration scales")
    expected = geom.dim_n - (geom.dim_n - 1) * p / 2.0
    slope = _loglog_slope(kept, masses)
    if not math.isfinite(slope):
        raise InsufficientDataError("concentration slope is not finite")
    return ScalingProbe(tuple(kept), tuple(masses), slope, expected)
