"""Property grid for the special-function evaluators."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from blowuplab.specfun.bessel import i_scaled_array, k_scaled_array
from blowuplab.specfun.gamma import gamma_fn
from blowuplab.specfun.hypergeometric import HypergeometricParams, hyp2f1
from blowuplab.validators.report import IdentityCheck, SuiteReport

logger = logging.getLogger(__name__)

WRONSKIAN_TOL = 1e-9
SMALL_ARG = 1e-6
SMALL_ARG_TOL = 1e-5
LARGE_ARG = 500.0
LARGE_ARG_TOL = 1e-2
MIN_ORDER = 1.8
DERIVATIVE_TOL = 1e-3
INFORMATIVE_RESIDUAL = 1e-7
HYPERGEOMETRIC_TOL = 1e-10
GAMMA_TOL = 1e-12
# derivative checks stay where unscaled values are comfortably finite
DERIVATIVE_RANGE = (0.1, 50.0)

Array = NDArray[np.float64]


@dataclass(frozen=True)
class SpecfunGrid:
    """
    Orders and arguments sampled by the suite.

    ``k_scale`` multiplies every K value and exists for fault injection.
    """

    orders: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5)
    z_values: tuple[float, ...] = (1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
    k_scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.orders or not self.z_values:
            raise ValueError("specfun grid needs at least one order and one argument")
        if any(z <= 0.0 for z in self.z_values):
            raise ValueError("specfun grid arguments must be positive")


class _Evaluators:
    def __init__(self, grid: SpecfunGrid) -> None:
        self.k_scale = grid.k_scale

    def i_s(self, nu: float, z: Array) -> Array:
        return i_scaled_array(nu, z)

    def k_s(self, nu: float, z: Array) -> Array:
        return self.k_scale * k_scaled_array(nu, z)


def _worst(name: str, residuals: Array, bound: float, labels: list[str]) -> IdentityCheck:
    finite = np.where(np.isfinite(residuals), residuals, np.inf)
    index = int(np.argmax(finite))
    return IdentityCheck(name, float(finite[index]), bound, labels[index])


def _wronskian(ev: _Evaluators, grid: SpecfunGrid) -> IdentityCheck:
    z = np.asarray(grid.z_values, dtype=float)
    residuals, labels = [], []
    for nu in grid.orders:
        value = z * (ev.i_s(nu, z) * ev.k_s(nu + 1.0, z) + ev.i_s(nu + 1.0, z) * ev.k_s(nu, z))
        residuals.append(np.abs(value - 1.0))
        labels.extend(f"nu={nu}, z={zi}" for zi in z)
    return _worst("wronskian", np.concatenate(residuals), WRONSKIAN_TOL, labels)


def _fd_order(
    name: str,
    lhs: Callable[[Array], Array],
    rhs: Callable[[Array], Array],
    z: Array,
    label: str,
) -> tuple[IdentityCheck, IdentityCheck]:
    """Relative centred-difference residuals at h and h/2 and the observed order."""
    residuals = []
    coarse_step = 1e-2 * np.minimum(z, 1.0)
    for h in (coarse_step, 0.5 * coarse_step):
        derivative = (lhs(z + h) - lhs(z - h)) / (2.0 * h)
        expected = rhs(z)
        residuals.append(np.abs(derivative - expected) / np.abs(expected))
    coarse, fine = residuals
    # residuals near round-off carry no order information
    informative = coarse > INFORMATIVE_RESIDUAL
    orders = np.log2(coarse[informative] / fine[informative])
    labels = [f"{label}, z={zi}" for zi in z]
    residual_check = _worst(f"{name}_residual", fine, DERIVATIVE_TOL, labels)
    if orders.size == 0:
        return residual_check, IdentityCheck(f"{name}_order", 2.0, MIN_ORDER, label, True)
    worst = int(np.argmin(orders))
    worst_label = [lab for lab, keep in zip(labels, informative) if keep][worst]
    return residual_check, IdentityCheck(
        f"{name}_order", float(orders[worst]), MIN_ORDER, worst_label, True
    )


def _derivative_checks(ev: _Evaluators, grid: SpecfunGrid) -> list[IdentityCheck]:
    lo, hi = DERIVATIVE_RANGE
    z = np.asarray([v for v in grid.z_values if lo <= v <= hi], dtype=float)
    if z.size == 0:
        return []
    merged: dict[str, IdentityCheck] = {}
    for nu in grid.orders:
        pairs = {
            "derivative_i": (
                lambda x, n=nu: x ** (-n) * ev.i_s(n, x) * np.exp(x),
                lambda x, n=nu: x ** (-n) * ev.i_s(n + 1.0, x) * np.exp(x),
            ),
            "derivative_k_minus": (
                lambda x, n=nu: x ** (-n) * ev.k_s(n, x) * np.exp(-x),
                lambda x, n=nu: -(x ** (-n)) * ev.k_s(n + 1.0, x) * np.exp(-x),
            ),
            "derivative_k_plus": (
                lambda x, n=nu: x**n * ev.k_s(n, x) * np.exp(-x),
                lambda x, n=nu: -(x**n) * ev.k_s(abs(n - 1.0), x) * np.exp(-x),
            ),
        }
        for name, (lhs, rhs) in pairs.items():
            for check in _fd_order(name, lhs, rhs, z, f"nu={nu}"):
                current = merged.get(check.name)
                if current is None or (
                    check.value < current.value if check.at_least else check.value > current.value
                ):
                    merged[check.name] = check
    return list(merged.values())


def _limit_checks(ev: _Evaluators, grid: SpecfunGrid) -> list[IdentityCheck]:
    small = np.array([SMALL_ARG])
    large = np.array([LARGE_ARG])
    rows: dict[str, list[tuple[float, str]]] = {
        "small_arg_i": [],
        "small_arg_k": [],
        "large_arg_i": [],
        "large_arg_k": [],
    }
    for nu in grid.orders:
        label = f"nu={nu}"
        limit_i = 1.0 / (2.0**nu * math.gamma(nu + 1.0))
        value_i = float((small ** (-nu) * ev.i_s(nu, small) * np.exp(small))[0])
        rows["small_arg_i"].append((abs(value_i / limit_i - 1.0), label))
        if nu > 0.0:
            limit_k = 2.0 ** (nu - 1.0) * math.gamma(nu)
            value_k = float((small**nu * ev.k_s(nu, small) * np.exp(-small))[0])
            rows["small_arg_k"].append((abs(value_k / limit_k - 1.0), label))
        root = math.sqrt(LARGE_ARG)
        scaled_i = root * float(ev.i_s(nu, large)[0]) * math.sqrt(2.0 * math.pi)
        scaled_k = root * float(ev.k_s(nu, large)[0]) / math.sqrt(math.pi / 2.0)
        rows["large_arg_i"].append((abs(scaled_i - 1.0), label))
        rows["large_arg_k"].append((abs(scaled_k - 1.0), label))

    bounds = {
        "small_arg_i": SMALL_ARG_TOL,
        "small_arg_k": SMALL_ARG_TOL,
        "large_arg_i": LARGE_ARG_TOL,
        "large_arg_k": LARGE_ARG_TOL,
    }
    checks = []
    for name, entries in rows.items():
        if entries:
            value, label = max(entries)
            checks.append(IdentityCheck(name, value, bounds[name], label))
    return checks


def _monotonicity(ev: _Evaluators, grid: SpecfunGrid) -> list[IdentityCheck]:
    """Count of sign or monotonicity violations (log I increasing, log K decreasing)."""
    z = np.sort(np.asarray(grid.z_values, dtype=float))
    violations_pos = 0
    violations_mono = 0
    for nu in grid.orders:
        i_s = ev.i_s(nu, z)
        k_s = ev.k_s(nu, z)
        violations_pos += int(np.count_nonzero(i_s <= 0.0) + np.count_nonzero(k_s <= 0.0))
        log_i = np.log(i_s) + z
        log_k = np.log(k_s) - z
        violations_mono += int(np.count_nonzero(np.diff(log_i) <= 0.0))
        violations_mono += int(np.count_nonzero(np.diff(log_k) >= 0.0))
    return [
        IdentityCheck("positivity", float(violations_pos), 0.0, "all orders"),
        IdentityCheck("monotonicity", float(violations_mono), 0.0, "all orders"),
    ]


def _closed_forms() -> list[IdentityCheck]:
    entries: list[tuple[float, str]] = []
    for a, b, z in ((0.7, 1.3, 0.5), (2.0, 0.5, 0.3), (1.5, 2.0, 0.8)):
        value = hyp2f1(HypergeometricParams(a=a, b=b, c=a, z=z)).value
        entries.append((abs(value / (1.0 - z) ** (-b) - 1.0), f"F({a},{b},{a};{z})"))
    for x in (0.1, 0.5, 0.9):
        value = hyp2f1(HypergeometricParams(a=0.5, b=1.0, c=1.5, z=x * x)).value
        entries.append((abs(value / (math.atanh(x) / x) - 1.0), f"F(1/2,1,3/2;{x * x})"))
    hyp_value, hyp_label = max(entries)

    gamma_entries = [
        (abs(gamma_fn(0.5).value / math.sqrt(math.pi) - 1.0), "x=0.5"),
        *((abs(gamma_fn(n).value / math.factorial(n - 1) - 1.0), f"x={n}") for n in (1, 5, 10)),
    ]
    gamma_value, gamma_label = max(gamma_entries)
    return [
        IdentityCheck("hypergeometric_closed_forms", hyp_value, HYPERGEOMETRIC_TOL, hyp_label),
        IdentityCheck("gamma_values", gamma_value, GAMMA_TOL, gamma_label),
    ]


def verify_specfun(grid: SpecfunGrid | None = None) -> SuiteReport:
    """
    Evaluate every special-function identity on the grid.

    :param grid: Orders and arguments; defaults to the standard grid.
    :type grid: SpecfunGrid | None
    :return: Report with one check per identity.
    :rtype: blowuplab.validators.report.SuiteReport
    """
    grid = grid or SpecfunGrid()
    ev = _Evaluators(grid)
    report = SuiteReport("specfun")
    report.add(_wronskian(ev, grid))
    for check in _derivative_checks(ev, grid):
        report.add(check)
    for check in _limit_checks(ev, grid):
        report.add(check)
    for check in _monotonicity(ev, grid):
        report.add(check)
    for check in _closed_forms():
        report.add(check)
    for check in report.checks:
        logger.debug("%s: %.3e (bound %.1e)", check.name, check.value, check.bound)
    return report
