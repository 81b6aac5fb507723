"""
Globally adaptive Gauss-Legendre quadrature.

Each panel carries a 15-point Gauss value on the whole panel and on its two
halves; the difference is the panel's error estimate. The panel with the
largest estimate is split until the summed estimate meets the tolerance.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from blowuplab.specfun.base import MACHINE_EPS, AccuracyError

logger = logging.getLogger(__name__)

GAUSS_ORDER = 15
# Estimates below this fraction of |I| are rounding noise.
RELATIVE_FLOOR = 1e-13

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)

Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class QuadratureAccuracyError(AccuracyError):
    """Raised when the panel budget is exhausted before the tolerance is met."""


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value, summed error estimate and number of panels used."""

    value: float
    abs_error: float
    n_panels: int


@dataclass(order=True)
class _Panel:
    sort_key: float
    a: float = field(compare=False)
    b: float = field(compare=False)
    value: float = field(compare=False)
    error: float = field(compare=False)
    left: float = field(compare=False)
    right: float = field(compare=False)


def _gauss_values(f: Integrand, bounds: list[tuple[float, float]]) -> list[float]:
    """15-point Gauss values on several intervals from one vectorized call."""
    lows = np.array([lo for lo, _ in bounds])
    highs = np.array([hi for _, hi in bounds])
    half = 0.5 * (highs - lows)
    mid = 0.5 * (highs + lows)
    points = mid[:, None] + half[:, None] * _NODES[None, :]
    values = np.asarray(f(points.ravel()), dtype=float).reshape(points.shape)
    return list(half * (values @ _WEIGHTS))


def _panel(a: float, b: float, coarse: float, left: float, right: float) -> _Panel:
    fine = left + right
    error = abs(fine - coarse)
    return _Panel(-error, a, b, fine, error, left, right)


def _split(f: Integrand, panel: _Panel) -> tuple[_Panel, _Panel]:
    a, b = panel.a, panel.b
    m = 0.5 * (a + b)
    q1, q2 = 0.5 * (a + m), 0.5 * (m + b)
    ll, lr, rl, rr = _gauss_values(f, [(a, q1), (q1, m), (m, q2), (q2, b)])
    return _panel(a, m, panel.left, ll, lr), _panel(m, b, panel.right, rl, rr)


def adaptive_gauss(
    f: Integrand,
    a: float,
    b: float,
    *,
    abs_tol: float,
    rel_tol: float = 0.0,
    max_subdivisions: int = 400,
    min_panels: int = 1,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """
    Integrate a vectorized ``f`` over [a, b].

    Convergence means the summed panel estimate is at most
    ``max(abs_tol, rel_tol * |I|, RELATIVE_FLOOR * |I|)``. Breakpoints inside
    (a, b) become panel edges from the start, so a peak narrower than the
    first panels is not missed.

    :param f: Integrand accepting and returning 1-D float arrays.
    :type f: collections.abc.Callable
    :param a: Lower limit.
    :type a: float
    :param b: Upper limit, ``b >= a``.
    :type b: float
    :param abs_tol: Absolute error target.
    :type abs_tol: float
    :param rel_tol: Error target relative to |I|.
    :type rel_tol: float
    :param max_subdivisions: Maximum number of panels.
    :type max_subdivisions: int
    :param min_panels: Number of equal panels to start from.
    :type min_panels: int
    :param breakpoints: Extra initial panel edges; points outside (a, b) are ignored.
    :type breakpoints: collections.abc.Sequence[float]
    :return: Integral, error estimate and panel count.
    :rtype: QuadratureResult
    :raises QuadratureAccuracyError: If the panel budget runs out first.
    """
    if b < a:
        raise ValueError(f"adaptive_gauss requires b >= a, got [{a}, {b}]")
    if b == a:
        return QuadratureResult(0.0, 0.0, 0)

    inner = [x for x in breakpoints if a < x < b]
    edges = np.unique(np.concatenate([np.linspace(a, b, min_panels + 1), inner]))
    bounds: list[tuple[float, float]] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        bounds.extend([(lo, hi), (lo, mid), (mid, hi)])
    values = _gauss_values(f, bounds)
    heap = [
        _panel(float(lo), float(hi), *values[3 * i : 3 * i + 3])
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:]))
    ]
    heapq.heapify(heap)

    while True:
        total = math.fsum(p.value for p in heap)
        error = math.fsum(p.error for p in heap) + MACHINE_EPS * len(heap) * abs(total)
        if error <= max(abs_tol, max(rel_tol, RELATIVE_FLOOR) * abs(total)):
            return QuadratureResult(total, error, len(heap))
        if len(heap) >= max_subdivisions:
            raise QuadratureAccuracyError(
                f"quadrature on [{a}, {b}] reached {len(heap)} panels with "
                f"error estimate {error:.3e} > {abs_tol:.3e}",
                partial_value=total,
                abs_error_estimate=error,
            )
        worst = heapq.heappop(heap)
        for child in _split(f, worst):
            heapq.heappush(heap, child)
        logger.debug("split panel [%.6g, %.6g] (err %.3e)", worst.a, worst.b, worst.error)


def gauss_legendre_nodes(a: float, b: float, n: int) -> tuple[NDArray, NDArray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w
