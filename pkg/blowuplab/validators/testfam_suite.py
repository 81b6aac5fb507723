"""Grid table certifying Φ_β against its bounds and the light-cone identity."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from blowuplab.schema.geometry import ExteriorGeometry, LightConePoint, TestFunctionParams
from blowuplab.specfun.base import AccuracyError
from blowuplab.testfam.family import (
    light_cone_closed_form,
    phi_beta,
    phi_beta_bounds,
    sandwich_scan,
    yz_integral,
)
from blowuplab.validators.report import IdentityCheck, SuiteReport

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-6
SANDWICH_SLACK = -1e-12


@dataclass(frozen=True)
class TestfamGrid:
    """Sample points of the table; every (r, t) pair must satisfy 1 <= r < t, t >= 1."""

    __test__ = False

    dimensions: tuple[int, ...] = (3,)
    betas: tuple[float, ...] = (1.0, 2.0)
    radii: tuple[float, ...] = (1.0, 1.5, 2.0, 4.0)
    times: tuple[float, ...] = (5.0, 10.0, 20.0)
    quad_tolerance: float = 1e-10
    sandwich_lambdas: tuple[float, ...] = tuple(np.geomspace(1e-3, 1.0, 13).tolist())
    sandwich_radii: tuple[float, ...] = tuple(np.linspace(1.0, 100.0, 34).tolist())

    def __post_init__(self) -> None:
        if not (self.dimensions and self.betas and self.radii and self.times):
            raise ValueError("testfam grid needs dimensions, betas, radii and times")
        if min(self.times) < 1.0:
            raise ValueError("testfam grid times must be >= 1")


@dataclass(frozen=True)
class TestfamRow:
    """One (N, β, r, t) row; ``flag`` names a quadrature failure, empty otherwise."""

    __test__ = False

    dim_n: int
    beta: float
    r: float
    t: float
    phi_beta: float
    lower_bound: float
    upper_shape: float
    identity_residual: float
    flag: str = ""

    @property
    def sandwich_ok(self) -> bool:
        return self.phi_beta - self.lower_bound >= SANDWICH_SLACK * max(1.0, self.lower_bound)

    @property
    def passed(self) -> bool:
        return not self.flag and self.sandwich_ok and self.identity_residual <= IDENTITY_TOL


@dataclass
class TestfamTable:
    __test__ = False

    rows: list[TestfamRow] = field(default_factory=list)
    report: SuiteReport = field(default_factory=lambda: SuiteReport("testfam"))


def _row(geom: ExteriorGeometry, beta: float, r: float, t: float, tol: float) -> TestfamRow:
    point = LightConePoint(r=r, t=t)
    params = TestFunctionParams(beta=beta, quad_tolerance=tol)
    lower, upper = phi_beta_bounds(geom, beta, point)
    try:
        value = phi_beta(geom, params, point).value
        identity = yz_integral(geom, beta, r, t, quad_tolerance=tol).value
    except AccuracyError as exc:
        logger.warning("N=%d beta=%g r=%g t=%g: %s", geom.dim_n, beta, r, t, exc)
        return TestfamRow(geom.dim_n, beta, r, t, math.nan, lower, upper, math.nan, "quadrature")
    closed = light_cone_closed_form(geom, beta, r, t)
    residual = abs(identity - closed) / abs(closed)
    return TestfamRow(geom.dim_n, beta, r, t, value, lower, upper, residual)


def build_testfam_table(grid: TestfamGrid | None = None) -> TestfamTable:
    """
    Evaluate Φ_β, its bounds and the light-cone identity on every admissible grid point.

    The report records the worst identity residual, the number of rows
    breaking the lower bound, the number of flagged rows, the empirical
    upper-bound constant sup Φ_β / shape, and the φ_λ sandwich margin.

    :param grid: Sample points; defaults to the standard grid.
    :type grid: TestfamGrid | None
    :return: Rows and summary report.
    :rtype: TestfamTable
    """
    grid = grid or TestfamGrid()
    table = TestfamTable()
    for dim_n in grid.dimensions:
        geom = ExteriorGeometry(dim_n=dim_n, support_radius_r0=2.0)
        for beta in grid.betas:
            for t in grid.times:
                for r in grid.radii:
                    if not 1.0 <= r < t:
                        continue
                    table.rows.append(_row(geom, beta, r, t, grid.quad_tolerance))

        scan = sandwich_scan(
            geom, np.asarray(grid.sandwich_lambdas), np.asarray(grid.sandwich_radii)
        )
        table.report.add(
            IdentityCheck(
                f"sandwich_margin_N{dim_n}",
                -scan.min_margin,
                -SANDWICH_SLACK,
                f"lambda={scan.worst_lambda:.4g}, r={scan.worst_r:.4g}",
            )
        )
        table.report.constants[f"sandwich_ratio_N{dim_n}"] = scan.sup_ratio

    rows = table.rows
    if not rows:
        raise ValueError("testfam grid has no admissible (r, t) pairs")
    residuals = [row.identity_residual for row in rows if not row.flag]
    worst = max(rows, key=lambda row: row.identity_residual if not row.flag else -1.0)
    table.report.add(
        IdentityCheck(
            "light_cone_identity",
            max(residuals) if residuals else 0.0,
            IDENTITY_TOL,
            f"N={worst.dim_n}, beta={worst.beta}, r={worst.r}, t={worst.t}",
        )
    )
    table.report.add(
        IdentityCheck(
            "lower_bound_violations",
            float(sum(not row.sandwich_ok for row in rows if not row.flag)),
            0.0,
            "rows",
        )
    )
    table.report.add(
        IdentityCheck("quadrature_flags", float(sum(bool(row.flag) for row in rows)), 0.0, "rows")
    )
    ratios = [
        row.phi_beta / row.upper_shape for row in rows if not row.flag and row.upper_shape > 0.0
    ]
    table.report.constants["upper_bound_constant"] = max(ratios) if ratios else 0.0
    return table
