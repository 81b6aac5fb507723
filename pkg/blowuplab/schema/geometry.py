"""Geometry and test-function parameter models for the exterior of the unit ball."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ExteriorGeometry(BaseModel):
    """
    Exterior domain Ω₀ = ℝ^N minus the closed unit ball, with data radius r₀.

    :param dim_n: Space dimension N >= 3.
    :type dim_n: int
    :param support_radius_r0: Radius r₀ > 1 containing the data support.
    :type support_radius_r0: float
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    dim_n: int = Field(ge=3)
    support_radius_r0: float = Field(gt=1.0)

    @property
    def nu(self) -> float:
        """Bessel order (N - 2) / 2."""
        return (self.dim_n - 2) / 2.0

    @property
    def sphere_area(self) -> float:
        """|S^{N-1}| = 2 π^{N/2} / Γ(N/2)."""
        return 2.0 * math.pi ** (self.dim_n / 2.0) / math.gamma(self.dim_n / 2.0)


class TestFunctionParams(BaseModel):
    """
    Parameters of Φ_β and its shifted variant.

    :param beta: Decay exponent β > 0.
    :type beta: float
    :param t_shift: Time shift t_β >= 1.
    :type t_shift: float
    :param quad_tolerance: Absolute tolerance of the λ quadrature.
    :type quad_tolerance: float
    :param quad_max_subdivisions: Panel budget of the adaptive quadrature.
    :type quad_max_subdivisions: int
    """

    __test__ = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta: float = Field(gt=0.0)
    t_shift: float = Field(default=1.0, ge=1.0)
    quad_tolerance: float = Field(default=1e-10, gt=0.0)
    quad_max_subdivisions: int = Field(default=400, ge=1)

    def with_beta(self, beta: float) -> TestFunctionParams:
        """Same quadrature controls and shift, different exponent."""
        return self.model_copy(update={"beta": beta})

    def check_shift(self, geom: ExteriorGeometry) -> None:
        """
        Enforce t_β > r₀.

        :raises ValueError: If the shift does not clear the data support.
        """
        if not self.t_shift > geom.support_radius_r0:
            raise ValueError(
                f"t_shift={self.t_shift} must exceed r0={geom.support_radius_r0}"
            )


class LightConePoint(BaseModel):
    """
    A point (|x|, t) of the exterior light cone: 1 <= r < t.

    :param r: Radius |x|.
    :type r: float
    :param t: Time.
    :type t: float
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    r: float = Field(ge=1.0)
    t: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _inside_cone(self) -> LightConePoint:
        if not self.r < self.t:
            raise ValueError(f"point (r={self.r}, t={self.t}) is outside the light cone r < t")
        return self
