from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.special as sc
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from blowuplab.specfun import (
    AccuracyError,
    DomainError,
    HypergeometricParams,
    SpecialFunctionRangeError,
    bessel_i,
    bessel_i_scaled,
    bessel_ik_scaled,
    bessel_k,
    bessel_k_scaled,
    gamma_fn,
    hyp2f1,
    pochhammer,
    regularized_lower_gamma,
)
from blowuplab.specfun.bessel import i_scaled_array, k_scaled_array

ORDERS = [0.0, 0.5, 1.0, 1.5, 2.0, 3.5]
ARGS = [1e-3, 0.1, 1.0, 2.0, 5.0, 30.0, 120.0]


@pytest.mark.parametrize("nu", ORDERS)
@pytest.mark.parametrize("z", ARGS)
def test_scaled_bessel_matches_scipy(nu: float, z: float) -> None:
    assert bessel_i_scaled(nu, z).value == pytest.approx(sc.ive(nu, z), rel=1e-10)
    assert bessel_k_scaled(nu, z).value == pytest.approx(sc.kve(nu, z), rel=1e-10)


@pytest.mark.parametrize("nu", ORDERS)
@pytest.mark.parametrize("z", ARGS)
def test_bessel_error_estimates_cover_scipy(nu: float, z: float) -> None:
    i_val, k_val = bessel_ik_scaled(nu, z)
    for result, reference in ((i_val, sc.ive(nu, z)), (k_val, sc.kve(nu, z))):
        assert 0.0 < result.abs_error_estimate <= 1e-12 * result.value
        assert abs(result.value - reference) <= 100.0 * result.abs_error_estimate


def test_series_error_grows_with_argument() -> None:
    # the leading term e^{-z}(z/2)^ν/Γ(ν+1) carries rounding proportional to z
    near = bessel_i_scaled(1.0, 0.5)
    far = bessel_i_scaled(1.0, 11.0)
    assert far.abs_error_estimate / far.value > near.abs_error_estimate / near.value


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 20.0])
def test_half_integer_closed_forms(z: float) -> None:
    k_half = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)
    i_half = math.sqrt(2.0 / (math.pi * z)) * math.sinh(z)
    assert bessel_k(0.5, z).value == pytest.approx(k_half, rel=1e-12)
    assert bessel_i(0.5, z).value == pytest.approx(i_half, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    nu=st.floats(min_value=0.0, max_value=5.0),
    z=st.floats(min_value=1e-3, max_value=200.0),
)
def test_wronskian_identity(nu: float, z: float) -> None:
    i_nu, k_nu = (float(v[0]) for v in (i_scaled_array(nu, z), k_scaled_array(nu, z)))
    i_next, k_next = (
        float(v[0]) for v in (i_scaled_array(nu + 1.0, z), k_scaled_array(nu + 1.0, z))
    )
    wronskian = z * (i_nu * k_next + i_next * k_nu)
    assert abs(wronskian - 1.0) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(nu=st.floats(min_value=0.0, max_value=5.0), z=st.floats(min_value=1e-2, max_value=50.0))
def test_scaled_values_are_positive_and_paired(nu: float, z: float) -> None:
    i_val, k_val = bessel_ik_scaled(nu, z)
    assert i_val.value > 0.0
    assert k_val.value > 0.0
    assert i_val.value == pytest.approx(bessel_i_scaled(nu, z).value, rel=1e-12)
    assert k_val.value == pytest.approx(bessel_k_scaled(nu, z).value, rel=1e-12)


def test_k_order_enters_through_absolute_value() -> None:
    assert bessel_k_scaled(-1.5, 2.0).value == bessel_k_scaled(1.5, 2.0).value


def test_i_increasing_and_k_decreasing() -> None:
    z = np.linspace(0.1, 20.0, 200)
    i_vals = i_scaled_array(1.0, z) * np.exp(z)
    k_vals = k_scaled_array(1.0, z) * np.exp(-z)
    assert np.all(np.diff(i_vals) > 0.0)
    assert np.all(np.diff(k_vals) < 0.0)


def test_bessel_domain_errors() -> None:
    with pytest.raises(DomainError):
        bessel_i(1.0, 0.0)
    with pytest.raises(DomainError):
        bessel_k(1.0, -1.0)
    with pytest.raises(DomainError):
        bessel_i_scaled(-0.5, 1.0)


def test_unscaled_i_overflow_points_to_scaled_variant() -> None:
    with pytest.raises(SpecialFunctionRangeError) as exc:
        bessel_i(1.0, 800.0)
    assert "scaled" in str(exc.value)
    assert math.isfinite(bessel_i_scaled(1.0, 800.0).value)


def test_gamma_and_pochhammer() -> None:
    assert gamma_fn(0.5).value == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(5.0).value == pytest.approx(24.0, rel=1e-14)
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    assert pochhammer(3.0, 0) == 1.0
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 4.5])
@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 7.0])
def test_regularized_lower_gamma_matches_scipy(a: float, x: float) -> None:
    assert regularized_lower_gamma(a, x).value == pytest.approx(sc.gammainc(a, x), abs=1e-14)


def test_regularized_lower_gamma_exponential_case() -> None:
    assert regularized_lower_gamma(1.0, 1.0).value == pytest.approx(1.0 - math.exp(-1.0))
    with pytest.raises(DomainError):
        regularized_lower_gamma(0.0, 1.0)


@pytest.mark.parametrize(
    ("a", "b", "c", "z"),
    [
        (0.5, 1.0, 1.5, 0.3),
        (1.0, 1.5, 2.5, 0.81),
        (1.0, 1.5, 1.5, 0.49),
        (2.0, 2.5, 3.5, 0.95),
        (0.25, 0.75, 2.0, 0.99),
    ],
)
def test_hyp2f1_matches_scipy(a: float, b: float, c: float, z: float) -> None:
    assert hyp2f1(HypergeometricParams(a, b, c, z)).value == pytest.approx(
        sc.hyp2f1(a, b, c, z), rel=1e-10
    )


def test_hyp2f1_matches_sympy_reference() -> None:
    half = sympy.Rational(1, 2)
    reference = float(sympy.hyper([3 * half, 2], [5 * half], sympy.Float("0.64")).evalf(30))
    assert hyp2f1(HypergeometricParams(1.5, 2.0, 2.5, 0.64)).value == pytest.approx(
        reference, rel=1e-12
    )


def test_hyp2f1_elementary_forms() -> None:
    z = 0.6
    log_form = -math.log(1.0 - z) / z
    assert hyp2f1(HypergeometricParams(1.0, 1.0, 2.0, z)).value == pytest.approx(
        log_form, rel=1e-12
    )
    assert hyp2f1(HypergeometricParams(0.7, 2.0, 2.0, z)).value == pytest.approx(
        (1.0 - z) ** -0.7, rel=1e-12
    )
    assert hyp2f1(HypergeometricParams(1.0, 1.0, 2.0, 0.0)).value == 1.0


def test_hyp2f1_rejects_bad_parameters() -> None:
    with pytest.raises(DomainError):
        HypergeometricParams(1.0, 1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        HypergeometricParams(1.0, 1.0, 2.0, 1.0)


def test_hyp2f1_reports_partial_sum_when_series_stalls() -> None:
    with pytest.raises(AccuracyError) as exc:
        hyp2f1(HypergeometricParams(2.0, 2.0, 1.0, 0.9999))
    assert math.isfinite(exc.value.partial_value)
