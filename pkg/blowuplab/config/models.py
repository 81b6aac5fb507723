"""Pydantic models for blowuplab run configurations."""

from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from pydantic import BaseModel, ConfigDict, Field, model_validator

from blowuplab.schema.geometry import ExteriorGeometry

DEFAULT_OUTPUT_DIR = "runs"
DEFAULT_STRIDE = 10


class MissingSectionError(ValueError):
    """Raised when a command needs a config section that is absent."""


class ProfileKind(StrEnum):
    """Supported initial-data shapes."""

    BUMP = "bump"
    DIPOLE = "dipole"
    OUTGOING_PULSE = "outgoing_pulse"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class DataSpec(_Strict):
    """
    Initial data (εf, εg).

    ``bump`` uses one bump for both components, scaled by the two amplitudes;
    ``dipole`` balances g so that ∫ g U dx = 0; ``outgoing_pulse`` (N = 3)
    builds f = F/r, g = -F'/r from a bump F.
    """

    kind: ProfileKind = ProfileKind.BUMP
    support: tuple[float, float] = (1.5, 2.5)
    amplitude_f: float = 0.0
    amplitude_g: float = 1.0
    epsilon: float | None = Field(default=None, ge=0.0)
    epsilons: list[float] | None = None
    require_positivity: bool = True

    @model_validator(mode="after")
    def _check(self) -> DataSpec:
        a, b = self.support
        if not 1.0 < a < b:
            raise ValueError(f"support must satisfy 1 < a < b, got ({a}, {b})")
        if self.epsilons is not None:
            if not self.epsilons:
                raise ValueError("epsilons must not be empty")
            if any(eps <= 0.0 for eps in self.epsilons):
                raise ValueError("epsilons must be positive")
        return self


class SolverSpec(_Strict):
    """Leapfrog parameters; ``t_horizon`` is the base horizon of sweeps."""

    p_exponent: float = Field(gt=1.0)
    dr: float = Field(default=0.05, gt=0.0)
    cfl_factor: float = Field(default=0.45, gt=0.0, lt=1.0)
    blowup_threshold: float = Field(default=1e6, gt=0.0)
    t_horizon: float = Field(default=50.0, gt=0.0)
    nonlinear: bool = True


class TestfamSpec(_Strict):
    """Parameters of the Φ_β family; ``t_shift`` is searched when omitted."""

    __test__ = False

    beta: float = Field(default=2.0, gt=0.0)
    t_shift: float | None = Field(default=None, ge=1.0)
    quad_tolerance: float = Field(default=1e-10, gt=0.0)
    quad_max_subdivisions: int = Field(default=400, ge=1)


class DiagnosticsSpec(_Strict):
    """Scales R used by masses and probes."""

    scales: list[float] = Field(default_factory=lambda: [4.0, 8.0, 16.0], min_length=1)
    volume_scales: list[float] = Field(
        default_factory=lambda: [100.0, 200.0, 400.0, 800.0, 1600.0], min_length=3
    )
    identity_window: tuple[float, float] | None = None

    @model_validator(mode="after")
    def _check(self) -> DiagnosticsSpec:
        if any(scale <= 1.0 for scale in self.scales + self.volume_scales):
            raise ValueError("diagnostic scales must exceed 1")
        return self


class SpecfunVerifySpec(_Strict):
    """Grid of the special-function suite; ``k_perturbation`` injects a relative K error."""

    orders: list[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0, 2.5], min_length=1)
    z_values: list[float] = Field(
        default_factory=lambda: [1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0],
        min_length=1,
    )
    k_perturbation: float = 0.0

    @model_validator(mode="after")
    def _check(self) -> SpecfunVerifySpec:
        if any(nu < 0.0 or nu > 10.0 for nu in self.orders):
            raise ValueError("orders must lie in [0, 10]")
        if any(z <= 0.0 for z in self.z_values):
            raise ValueError("z_values must be positive")
        return self


class TestfamTableSpec(_Strict):
    """Grid of the ``testfam-table`` command."""

    __test__ = False

    dimensions: list[int] = Field(default_factory=lambda: [3], min_length=1)
    betas: list[float] = Field(default_factory=lambda: [1.0, 2.0], min_length=1)
    radii: list[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0, 4.0], min_length=1)
    times: list[float] = Field(default_factory=lambda: [5.0, 10.0, 20.0], min_length=1)

    @model_validator(mode="after")
    def _check(self) -> TestfamTableSpec:
        if any(n < 3 for n in self.dimensions):
            raise ValueError("dimensions must be >= 3")
        if any(beta <= 0.0 for beta in self.betas):
            raise ValueError("betas must be positive")
        if any(r < 1.0 for r in self.radii):
            raise ValueError("radii must be >= 1")
        if any(t < 1.0 for t in self.times):
            raise ValueError("times must be >= 1")
        return self


class RunConfig(_Strict):
    """
    Top-level configuration document.

    Every section is optional; commands call :meth:`require` for the
    sections they use.
    """

    geometry: ExteriorGeometry | None = None
    data: DataSpec | None = None
    solver: SolverSpec | None = None
    testfam: TestfamSpec = Field(default_factory=TestfamSpec)
    diagnostics: DiagnosticsSpec = Field(default_factory=DiagnosticsSpec)
    specfun_verify: SpecfunVerifySpec = Field(default_factory=SpecfunVerifySpec)
    testfam_table: TestfamTableSpec = Field(default_factory=TestfamTableSpec)
    output_dir: str | None = None
    stride: int = Field(default=DEFAULT_STRIDE, ge=1)
    jobs: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check(self) -> RunConfig:
        if self.geometry is not None and self.data is not None:
            r0 = self.geometry.support_radius_r0
            if self.data.support[1] > r0:
                raise ValueError(f"data support {self.data.support} exceeds r0={r0}")
            if self.data.kind is ProfileKind.OUTGOING_PULSE and self.geometry.dim_n != 3:
                raise ValueError("outgoing_pulse data exist only for N = 3")
        if self.geometry is not None and self.solver is not None:
            n = self.geometry.dim_n
            if self.solver.p_exponent > n / (n - 2):
                raise ValueError(f"p must not exceed N/(N-2) = {n / (n - 2):.6g}")
        return self

    def require(self, *sections: str) -> None:
        """
        :raises MissingSectionError: If any named section is unset.
        """
        missing = [name for name in sections if getattr(self, name) is None]
        if missing:
            raise MissingSectionError(f"config is missing section(s): {', '.join(missing)}")
