"""Lifespan records, scaling fits and functional traces."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LifespanRecord(BaseModel):
    """
    Outcome of one blowup run.

    ``t_num`` is ``None`` when the horizon was reached without blowup.
    ``t_num_refined`` holds the dr/2 rerun used for the convergence flag.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilon: float = Field(ge=0.0)
    t_num: float | None = None
    dr: float = Field(gt=0.0)
    dt: float = Field(gt=0.0)
    threshold: float = Field(gt=0.0)
    t_horizon: float = Field(gt=0.0)
    dim_n: int = Field(ge=3)
    p_exponent: float = Field(gt=1.0)
    converged: bool = False
    t_num_refined: float | None = None
    error: str | None = None

    @model_validator(mode="after")
    def _check(self) -> LifespanRecord:
        if self.t_num is not None and not self.t_num > 0.0:
            raise ValueError(f"t_num must be positive when finite, got {self.t_num}")
        if not self.dt < self.dr:
            raise ValueError(f"dt={self.dt} must be below dr={self.dr}")
        return self

    @property
    def reached_horizon(self) -> bool:
        return self.t_num is None and self.error is None

    @property
    def cfl_factor(self) -> float:
        return self.dt / self.dr

    @property
    def usable(self) -> bool:
        """Finite, converged and error-free: eligible for scaling fits."""
        return self.t_num is not None and self.converged and self.error is None


class ScalingFit(BaseModel):
    """Least-squares line through (ln ε, ln t_num)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    slope: float
    intercept: float
    r_squared: float = Field(ge=0.0, le=1.0)
    predicted_slope: float
    n_points: int = Field(ge=3)

    @property
    def relative_deviation(self) -> float:
        """|slope - predicted| / |predicted|."""
        return abs(self.slope - self.predicted_slope) / abs(self.predicted_slope)


class FunctionalTrace(BaseModel):
    """A scalar functional sampled at increasing times."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    times: list[float]
    values: list[float]

    @model_validator(mode="after")
    def _check(self) -> FunctionalTrace:
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal lengths")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if any(not math.isfinite(v) for v in self.values):
            raise ValueError(f"trace '{self.name}' contains non-finite values")
        return self
