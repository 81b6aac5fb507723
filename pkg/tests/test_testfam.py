from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, special

from blowuplab.schema.geometry import ExteriorGeometry, LightConePoint, TestFunctionParams
from blowuplab.specfun import DomainError
from blowuplab.testfam import (
    PhiBetaTable,
    QuadratureAccuracyError,
    TestFamilyError,
    adaptive_gauss,
    dt_relation_check,
    harmonic_pairing,
    harmonic_u,
    initial_functional,
    light_cone_closed_form,
    lower_bound_constant,
    phi_beta,
    phi_beta_bounds,
    phi_lambda,
    psi1,
    psi2,
    sandwich_scan,
    select_t_shift,
    shifted_phi,
    verify_eigen_equation,
    yz_integral,
)
from blowuplab.wavesim.data import ZeroProfile, make_bump


def _geom(n: int) -> ExteriorGeometry:
    return ExteriorGeometry(dim_n=n, support_radius_r0=2.5)


def test_harmonic_u_values(geom3: ExteriorGeometry, geom4: ExteriorGeometry) -> None:
    assert harmonic_u(geom3, 1.0) == 0.0
    assert harmonic_u(geom3, 2.0) == pytest.approx(0.5)
    assert harmonic_u(geom4, 2.0) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        harmonic_u(geom3, 0.5)


def test_psi_normalisation_in_three_dimensions(geom3: ExteriorGeometry) -> None:
    assert psi1(geom3, 0.0) == 1.0
    assert psi1(geom3, 2.0) == pytest.approx(math.sinh(2.0) / 2.0, rel=1e-12)
    assert psi2(geom3, 1.0) == pytest.approx(0.5778636748954609, rel=1e-13)
    with pytest.raises(DomainError):
        psi2(geom3, 0.0)


@pytest.mark.parametrize("lam", [1e-3, 0.1, 1.0, 5.0])
@pytest.mark.parametrize("r", [1.0, 1.2, 2.0, 10.0])
def test_phi_lambda_closed_form_in_three_dimensions(
    geom3: ExteriorGeometry, lam: float, r: float
) -> None:
    expected = (math.sinh(lam * r) - math.sinh(lam) * math.exp(lam * (1.0 - r))) / (lam * r)
    assert phi_lambda(geom3, lam, r) == pytest.approx(expected, rel=1e-9, abs=1e-300)


def test_phi_lambda_reference_value(geom3: ExteriorGeometry) -> None:
    assert phi_lambda(geom3, 1.0, 2.0) == pytest.approx(1.5972640, rel=1e-7)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_lambda_tends_to_harmonic_weight(n: int) -> None:
    geom = _geom(n)
    assert phi_lambda(geom, 1e-6, 3.0) == pytest.approx(harmonic_u(geom, 3.0), rel=1e-4)


def test_phi_lambda_rejects_bad_arguments(geom3: ExteriorGeometry) -> None:
    with pytest.raises(DomainError):
        phi_lambda(geom3, 0.0, 2.0)
    with pytest.raises(DomainError):
        phi_lambda(geom3, 1.0, 0.9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_eigen_equation_residual_is_second_order(n: int) -> None:
    geom = _geom(n)
    coarse = verify_eigen_equation(geom, 0.5, 2.0, 1e-2)
    fine = verify_eigen_equation(geom, 0.5, 2.0, 5e-3)
    assert coarse < 1e-3
    assert coarse / fine > 3.0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sandwich_lower_bound_holds(n: int) -> None:
    scan = sandwich_scan(_geom(n), np.geomspace(1e-3, 1.0, 100), np.linspace(1.0, 100.0, 100))
    assert scan.min_margin >= -1e-12
    assert 1.0 - 1e-9 <= scan.sup_ratio < math.inf


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("beta_kind", ["half", "one", "two", "n_minus_one"])
@pytest.mark.parametrize("ratio", [0.0, 0.3, 0.7, 0.9])
def test_light_cone_identity(n: int, beta_kind: str, ratio: float) -> None:
    beta = {"half": 0.5, "one": 1.0, "two": 2.0, "n_minus_one": n - 1.0}[beta_kind]
    geom = _geom(n)
    t = 4.0
    value = yz_integral(geom, beta, ratio * t, t).value
    closed = light_cone_closed_form(geom, beta, ratio * t, t)
    assert abs(value - closed) <= 1e-6 * abs(closed)


def test_yz_integral_outside_cone(geom3: ExteriorGeometry) -> None:
    with pytest.raises(DomainError):
        yz_integral(geom3, 1.0, 5.0, 5.0)


def test_phi_beta_vanishes_on_obstacle(geom3: ExteriorGeometry) -> None:
    params = TestFunctionParams(beta=2.0)
    assert phi_beta(geom3, params, LightConePoint(r=1.0, t=5.0)).value == 0.0


def test_phi_beta_matches_scipy_quadrature(geom3: ExteriorGeometry) -> None:
    beta, r, t = 1.5, 2.0, 6.0

    def integrand(lam: float) -> float:
        return math.exp(-lam * t) * phi_lambda(geom3, lam, r) * lam ** (beta - 1.0)

    reference, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12)
    reference /= math.gamma(beta)
    value = phi_beta(geom3, TestFunctionParams(beta=beta), LightConePoint(r=r, t=t)).value
    assert value == pytest.approx(reference, rel=1e-8)


@pytest.mark.parametrize("beta", [1.0, 2.0])
def test_phi_beta_lower_bound(geom3: ExteriorGeometry, beta: float) -> None:
    params = TestFunctionParams(beta=beta)
    for t in (2.0, 5.0, 20.0):
        for r in (1.0, 1.5, 1.9, 4.0, 15.0):
            if not r < t:
                continue
            point = LightConePoint(r=r, t=t)
            lower, upper_shape = phi_beta_bounds(geom3, beta, point)
            value = phi_beta(geom3, params, point).value
            assert value >= lower
            assert upper_shape >= lower


def test_lower_bound_constant() -> None:
    assert lower_bound_constant(1.0) == pytest.approx(1.0 - math.exp(-1.0))
    assert lower_bound_constant(2.0) == pytest.approx(1.0 - 2.0 * math.exp(-1.0))


def test_dt_relation_is_second_order(geom3: ExteriorGeometry) -> None:
    params = TestFunctionParams(beta=1.0, quad_tolerance=1e-13)
    point = LightConePoint(r=2.0, t=6.0)
    coarse = dt_relation_check(geom3, params, point, 0.5)
    fine = dt_relation_check(geom3, params, point, 0.25)
    assert coarse / fine > 3.0


def test_dt_relation_rejects_step_leaving_cone(geom3: ExteriorGeometry) -> None:
    with pytest.raises(DomainError):
        dt_relation_check(geom3, TestFunctionParams(beta=1.0), LightConePoint(r=2.0, t=2.5), 1.0)


def test_large_time_limit(geom3: ExteriorGeometry) -> None:
    t = 1e4
    value = phi_beta(geom3, TestFunctionParams(beta=1.0), LightConePoint(r=2.0, t=t)).value
    assert abs(t * value - harmonic_u(geom3, 2.0)) <= 1e-2


def _phi_one_three_dims(r: float, t: float) -> float:
    # ∫_0^1 (e^{-λa} - e^{-λb}) / (2λr) dλ with a = t - r, b = t + r - 2
    a, b = t - r, t + r - 2.0
    return (math.log1p((b - a) / a) + special.exp1(b) - special.exp1(a)) / (2.0 * r)


def _phi_two_three_dims(r: float, t: float) -> float:
    a, b = t - r, t + r - 2.0
    return (-math.expm1(-a) / a + math.expm1(-b) / b) / (2.0 * r)


@pytest.mark.parametrize("t", [20.0, 500.0, 5000.0, 1e4, 1e5])
def test_phi_beta_one_matches_closed_form_at_late_times(
    geom3: ExteriorGeometry, t: float
) -> None:
    value = phi_beta(geom3, TestFunctionParams(beta=1.0), LightConePoint(r=2.0, t=t)).value
    assert value == pytest.approx(_phi_one_three_dims(2.0, t), rel=1e-8)


@pytest.mark.parametrize("t", [20.0, 5000.0, 1e4])
def test_phi_beta_two_matches_closed_form_at_late_times(
    geom3: ExteriorGeometry, t: float
) -> None:
    value = phi_beta(geom3, TestFunctionParams(beta=2.0), LightConePoint(r=2.0, t=t)).value
    assert value == pytest.approx(_phi_two_three_dims(2.0, t), rel=1e-7)


def test_shifted_phi_scales_by_shift_power(geom3: ExteriorGeometry) -> None:
    params = TestFunctionParams(beta=2.0, t_shift=4.0)
    direct = phi_beta(geom3, params, LightConePoint(r=2.0, t=5.0)).value
    assert shifted_phi(geom3, params, 2.0, 1.0) == pytest.approx(16.0 * direct, rel=1e-12)


def test_phi_beta_table_agrees_with_quadrature(geom3: ExteriorGeometry) -> None:
    radii = np.array([1.0, 1.5, 2.0, 3.0])
    times = np.array([5.0, 10.0])
    table = PhiBetaTable(geom3, 2.0, radii)
    phi, phi_next = table.values(times)
    assert phi.shape == (2, 4)
    assert np.all(phi[:, 0] == 0.0)
    params = TestFunctionParams(beta=2.0)
    for i, t in enumerate(times):
        for j, r in enumerate(radii[1:], start=1):
            point = LightConePoint(r=float(r), t=float(t))
            assert phi[i, j] == pytest.approx(phi_beta(geom3, params, point).value, rel=1e-6)
            expected_next = phi_beta(geom3, params.with_beta(3.0), point).value
            assert phi_next[i, j] == pytest.approx(expected_next, rel=1e-6)


def test_adaptive_gauss_handles_endpoint_singularity() -> None:
    result = adaptive_gauss(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, abs_tol=1e-10)
    assert result.value == pytest.approx(2.0, abs=1e-9)
    assert result.n_panels > 1


def test_adaptive_gauss_budget_exhaustion_carries_partial_value() -> None:
    with pytest.raises(QuadratureAccuracyError) as exc:
        adaptive_gauss(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, abs_tol=1e-14, max_subdivisions=3)
    assert 1.0 < exc.value.partial_value < 2.0


def test_harmonic_pairing_matches_scipy(geom3: ExteriorGeometry) -> None:
    bump = make_bump(1.5, 2.5)

    def integrand(r: float) -> float:
        return float(bump(np.array([r]))[0]) * (1.0 - 1.0 / r) * r * r

    reference, _ = integrate.quad(integrand, 1.5, 2.5, epsabs=1e-14, epsrel=1e-12)
    assert harmonic_pairing(geom3, bump) == pytest.approx(4.0 * math.pi * reference, rel=1e-9)


def test_initial_functional_approaches_pairing_for_large_shift(geom3: ExteriorGeometry) -> None:
    bump = make_bump(1.5, 2.5)
    params = TestFunctionParams(beta=1.0, t_shift=2000.0)
    value = initial_functional(geom3, params, ZeroProfile(), bump).value
    assert value == pytest.approx(harmonic_pairing(geom3, bump), rel=1e-2)


def test_select_t_shift_doubles_from_twice_r0(geom3: ExteriorGeometry) -> None:
    bump = make_bump(1.5, 2.5)
    shift = select_t_shift(geom3, TestFunctionParams(beta=2.0), ZeroProfile(), bump)
    ratio = shift / (2.0 * geom3.support_radius_r0)
    assert ratio >= 1.0
    assert math.log2(ratio) == pytest.approx(round(math.log2(ratio)))


def test_select_t_shift_requires_positive_pairing(geom3: ExteriorGeometry) -> None:
    with pytest.raises(TestFamilyError):
        select_t_shift(
            geom3, TestFunctionParams(beta=2.0), ZeroProfile(), make_bump(1.5, 2.5, -1.0)
        )


@pytest.mark.parametrize("shift", [5120.0, 20480.0])
def test_initial_functional_stays_accurate_for_late_shifts(
    geom3: ExteriorGeometry, shift: float
) -> None:
    bump = make_bump(1.5, 2.5)
    params = TestFunctionParams(beta=2.0, t_shift=shift)
    value = initial_functional(geom3, params, ZeroProfile(), bump).value
    assert value == pytest.approx(harmonic_pairing(geom3, bump), rel=1e-2)


@pytest.mark.parametrize("amplitude_f", [0.0, -1.0, -50.0])
def test_select_t_shift_meets_half_pairing(geom3: ExteriorGeometry, amplitude_f: float) -> None:
    f = make_bump(1.5, 2.5, amplitude_f) if amplitude_f else ZeroProfile()
    g = make_bump(1.5, 2.5)
    params = TestFunctionParams(beta=2.0)
    shift = select_t_shift(geom3, params, f, g)
    value = initial_functional(geom3, params.model_copy(update={"t_shift": shift}), f, g).value
    assert value >= 0.5 * harmonic_pairing(geom3, g)


def test_select_t_shift_reaches_large_shifts(geom3: ExteriorGeometry) -> None:
    f = make_bump(1.5, 2.5, -4000.0)
    g = make_bump(1.5, 2.5)
    params = TestFunctionParams(beta=2.0)
    shift = select_t_shift(geom3, params, f, g)
    assert shift > 2560.0
    half_mass = 0.5 * harmonic_pairing(geom3, g)
    before = params.model_copy(update={"t_shift": shift / 2.0})
    assert initial_functional(geom3, before, f, g).value < half_mass


def test_select_t_shift_is_linear_in_velocity(geom3: ExteriorGeometry) -> None:
    params = TestFunctionParams(beta=2.0)
    g = make_bump(1.5, 2.5)
    g2 = make_bump(1.5, 2.5, 2.0)
    shift = select_t_shift(geom3, params, ZeroProfile(), g)
    assert select_t_shift(geom3, params, ZeroProfile(), g2) == shift
    at_shift = params.model_copy(update={"t_shift": shift})
    single = initial_functional(geom3, at_shift, ZeroProfile(), g).value
    double = initial_functional(geom3, at_shift, ZeroProfile(), g2).value
    assert double == pytest.approx(2.0 * single, rel=1e-9)


def test_dt_relation_residual_is_small(geom3: ExteriorGeometry) -> None:
    point = LightConePoint(r=2.0, t=6.0)
    assert dt_relation_check(geom3, TestFunctionParams(beta=1.0), point, 1e-2) <= 1e-6


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_lambda_small_lambda_limit(n: int) -> None:
    geom = _geom(n)
    for r in np.linspace(1.0, 10.0, 19):
        assert abs(phi_lambda(geom, 1e-4, float(r)) - harmonic_u(geom, float(r))) <= 1e-3


@pytest.mark.parametrize("scale", [2.0, 5.0])
@pytest.mark.parametrize("beta", [1.0, 2.5])
def test_yz_integral_scale_covariance(geom3: ExteriorGeometry, scale: float, beta: float) -> None:
    r, t = 1.5, 4.0
    base = yz_integral(geom3, beta, r, t).value
    scaled = yz_integral(geom3, beta, scale * r, scale * t).value
    assert scaled == pytest.approx(scale ** (-beta) * base, rel=1e-8)


@pytest.mark.parametrize("t", [20.0, 100.0])
def test_light_cone_identity_at_late_times(geom3: ExteriorGeometry, t: float) -> None:
    value = yz_integral(geom3, 2.5, 1.5, t).value
    assert value == pytest.approx(light_cone_closed_form(geom3, 2.5, 1.5, t), rel=1e-8)
