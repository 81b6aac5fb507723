"""Smooth compactly supported radial data and the positivity check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.schema.profiles import RadialProfile
from blowuplab.testfam.family import harmonic_pairing


class InitialDataError(ValueError):
    """Raised when data profiles violate their support or sign requirements."""


@dataclass(frozen=True)
class Bump:
    """
    s ↦ amplitude · exp(-1/(1-ξ²)), ξ = (2s-a-b)/(b-a), on (a, b); zero elsewhere.
    """

    a: float
    b: float
    amplitude: float = 1.0

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def _xi(self, r: NDArray[np.float64]) -> tuple[NDArray, NDArray]:
        xi = (2.0 * r - self.a - self.b) / (self.b - self.a)
        inside = np.abs(xi) < 1.0
        return xi, inside

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        r = np.asarray(r, dtype=float)
        xi, inside = self._xi(r)
        gap = np.where(inside, 1.0 - xi * xi, 1.0)
        return np.where(inside, self.amplitude * np.exp(-1.0 / gap), 0.0)

    def derivative(self, r: ArrayLike) -> NDArray[np.float64]:
        """Analytic d/dr of the bump."""
        r = np.asarray(r, dtype=float)
        xi, inside = self._xi(r)
        gap = np.where(inside, 1.0 - xi * xi, 1.0)
        slope = -2.0 * xi / (gap * gap) * (2.0 / (self.b - self.a))
        return np.where(inside, self.amplitude * np.exp(-1.0 / gap) * slope, 0.0)


@dataclass(frozen=True)
class CombinedProfile:
    """Linear combination Σ c_k B_k of bumps."""

    terms: tuple[tuple[float, Bump], ...]

    @property
    def support(self) -> tuple[float, float]:
        return (min(b.a for _, b in self.terms), max(b.b for _, b in self.terms))

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        r = np.asarray(r, dtype=float)
        return sum((c * bump(r) for c, bump in self.terms), np.zeros_like(r))


@dataclass(frozen=True)
class ZeroProfile:
    """The zero function."""

    @property
    def support(self) -> None:
        return None

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class OutgoingPulse:
    """
    Data of the N = 3 outgoing wave u = F(r - t)/r built from a bump F.

    ``component="f"`` gives F/r, ``component="g"`` gives -F'/r.
    """

    bump: Bump
    component: str = "f"

    @property
    def support(self) -> tuple[float, float]:
        return self.bump.support

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        r = np.asarray(r, dtype=float)
        if self.component == "f":
            return self.bump(r) / r
        return -self.bump.derivative(r) / r


def make_bump(a: float, b: float, amplitude: float = 1.0) -> Bump:
    """
    Build a C^∞ bump supported on (a, b) with peak amplitude · e^{-1}.

    :param a: Left end, ``a > 1``.
    :type a: float
    :param b: Right end, ``b > a``.
    :type b: float
    :param amplitude: Scale factor.
    :type amplitude: float
    :return: Bump profile.
    :rtype: Bump
    :raises InitialDataError: If the support touches the obstacle or is empty.
    """
    if not a > 1.0:
        raise InitialDataError(f"bump support must stay off the obstacle: a={a} <= 1")
    if not b > a:
        raise InitialDataError(f"bump support is empty: ({a}, {b})")
    return Bump(a, b, amplitude)


def make_dipole(a: float, b: float, amplitude: float, geom: ExteriorGeometry) -> CombinedProfile:
    """
    Positive bump on (a, m) minus a rescaled bump on (m, b), m = (a+b)/2,
    balanced so that ∫ g U r^{N-1} dr = 0.
    """
    mid = 0.5 * (a + b)
    inner = make_bump(a, mid, amplitude)
    outer = make_bump(mid, b, amplitude)
    # both pairings on the nodes of (a, b) so the balanced sum cancels to round-off
    inner_mass = harmonic_pairing(geom, CombinedProfile(((1.0, inner), (0.0, outer))))
    outer_mass = harmonic_pairing(geom, CombinedProfile(((0.0, inner), (1.0, outer))))
    return CombinedProfile(((1.0, inner), (-inner_mass / outer_mass, outer)))


@dataclass(frozen=True)
class InitialData:
    """
    Data (εf, εg) with f, g vanishing outside ``support`` = [a, b], 1 < a < b.

    :raises InitialDataError: On an invalid support or negative ε.
    """

    f_profile: RadialProfile
    g_profile: RadialProfile
    epsilon: float
    support: tuple[float, float]

    def __post_init__(self) -> None:
        a, b = self.support
        if not 1.0 < a < b:
            raise InitialDataError(f"data support must satisfy 1 < a < b, got ({a}, {b})")
        if self.epsilon < 0.0:
            raise InitialDataError(f"epsilon must be nonnegative, got {self.epsilon}")
        for profile in (self.f_profile, self.g_profile):
            inner = profile.support
            if inner is not None and (inner[0] < a or inner[1] > b):
                raise InitialDataError(f"profile support {inner} leaves ({a}, {b})")

    def with_epsilon(self, epsilon: float) -> InitialData:
        return InitialData(self.f_profile, self.g_profile, epsilon, self.support)


def check_positivity(data: InitialData, geom: ExteriorGeometry) -> float:
    """
    |S^{N-1}| ∫ g U r^{N-1} dr; positive values make the data blowup-eligible.

    :param data: Initial data.
    :type data: InitialData
    :param geom: Exterior geometry.
    :type geom: blowuplab.schema.geometry.ExteriorGeometry
    :return: Signed pairing of g with U.
    :rtype: float
    """
    return harmonic_pairing(geom, data.g_profile)
