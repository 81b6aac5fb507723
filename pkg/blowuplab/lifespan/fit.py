"""Scaling fits of numerical lifespans against ε."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from blowuplab.lifespan.exponents import predicted_exponent
from blowuplab.schema.records import LifespanRecord, ScalingFit

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 3


class InsufficientDataError(ValueError):
    """Raised when too few usable points remain for a fit."""


def _common_problem(records: Sequence[LifespanRecord]) -> tuple[int, float]:
    problems = {(r.dim_n, r.p_exponent) for r in records}
    if len(problems) != 1:
        raise ValueError(f"records mix several (N, p) problems: {sorted(problems)}")
    return problems.pop()


def fit_subcritical(records: Sequence[LifespanRecord]) -> ScalingFit:
    """
    Least-squares line through (ln ε, ln t_num) over usable records.

    :param records: Sweep records of one (N, p) problem.
    :type records: collections.abc.Sequence[blowuplab.schema.records.LifespanRecord]
    :return: Fitted slope and intercept with -2p(p-1)/γ attached.
    :rtype: blowuplab.schema.records.ScalingFit
    :raises InsufficientDataError: If fewer than three records are finite and converged.
    :raises blowuplab.specfun.base.DomainError: If p is not subcritical.
    """
    usable = [r for r in records if r.usable]
    if len(usable) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need {MIN_FIT_POINTS} finite converged records, got {len(usable)} "
            f"of {len(records)}"
        )
    dim_n, p = _common_problem(usable)
    x = np.log([r.epsilon for r in usable])
    y = np.log([r.t_num for r in usable])
    if np.ptp(x) == 0.0:
        raise InsufficientDataError("all usable records share one epsilon")

    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if total == 0.0 else 1.0 - float(np.sum(residual**2)) / total
    fit = ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(1.0, max(0.0, r_squared)),
        predicted_slope=-predicted_exponent(dim_n, p),
        n_points=len(usable),
    )
    logger.info(
        "fit slope %.4f vs predicted %.4f (r2=%.4f, n=%d)",
        fit.slope,
        fit.predicted_slope,
        fit.r_squared,
        fit.n_points,
    )
    return fit


@dataclass(frozen=True)
class TrendRow:
    epsilon: float
    scaled: float
    log_t_num: float


@dataclass(frozen=True)
class CriticalTrend:
    """ln t_num against ε^{-p(p-1)}, ordered by decreasing ε."""

    rows: tuple[TrendRow, ...]
    monotone: bool


def critical_trend(records: Sequence[LifespanRecord], dim_n: int, p: float) -> CriticalTrend:
    """
    Tabulate (ε, ε^{-p(p-1)}, ln t_num) for finite records; no fit is attempted.

    ``monotone`` reports whether ln t_num grows as ε decreases.
    """
    finite = sorted(
        (r for r in records if r.t_num is not None and r.error is None),
        key=lambda r: r.epsilon,
        reverse=True,
    )
    rows = tuple(
        TrendRow(r.epsilon, r.epsilon ** (-p * (p - 1.0)), math.log(r.t_num)) for r in finite
    )
    monotone = all(b.log_t_num >= a.log_t_num for a, b in zip(rows, rows[1:]))
    if not monotone:
        logger.warning("critical trend for N=%d p=%.6g is not monotone", dim_n, p)
    return CriticalTrend(rows=rows, monotone=monotone)


def threshold_robustness(
    records_a: Sequence[LifespanRecord], records_b: Sequence[LifespanRecord]
) -> float:
    """
    |slope_a - slope_b| / |slope_b| for two sweeps differing in blowup threshold.

    :raises InsufficientDataError: If either sweep cannot be fitted.
    """
    slope_a = fit_subcritical(records_a).slope
    slope_b = fit_subcritical(records_b).slope
    return abs(slope_a - slope_b) / abs(slope_b)
