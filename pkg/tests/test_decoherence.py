import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ohmic_probe.decoherence import (
    BathSpec,
    GammaResult,
    Method,
    asymptotic_slope,
    dgamma_domegac,
    dgamma_domegac_quadrature,
    dgamma_domegac_values,
    gamma,
    gamma_closed_form,
    gamma_quadrature,
    gamma_series,
    gamma_short_time_coeff,
    gamma_values,
    gamma_zero_temperature,
    spectral_density,
)
from ohmic_probe.errors import (
    DegenerateWindowError,
    DomainError,
    NonConvergenceError,
    SingularParameterError,
)

# (s, omega_c, T, tau, Gamma), frozen from a 30-digit mpmath evaluation of the
# Hurwitz closed form, itself cross-checked against mpmath quadrature
GAMMA_ORACLE = [
    (0.5, 1, 1, 1, 1.7468602983718476),
    (3, 1, 1, 1, 1.3638679404509253),
    (1, 1, 1, 1, 0.95527280832374002),
    (0.5, 0.01, 100, 1, 1.7724427744997401),
    (3, 100, 0.01, 0.1, 1.0097049308891934),
    (1, 100, 100, 0.05, 10.631600020094757),
    (0.5, 1, 0, 10, 4.7874638782847983),
    (3, 1, 0, 2, 1.12),
    (2.5, 2, 0.5, 3, 1.1121768125701874),
    (1.7, 0.3, 3, 5, 12.294818025269792),
]

# d Gamma / d omega_c from mpmath numerical differentiation of the same
DGAMMA_ORACLE = [
    (3, 1, 1, 1, 0.31759759491239688),
    (0.5, 1, 1, 1, 1.677779381433675),
    (1, 1, 1, 2, 1.7836143605510208),
    (0.5, 0.01, 100, 1, 177.24206223341766),
    (3, 100, 0, 0.01, 0.005),
]

# c2 = (1/2) int J(w) coth(w / 2T) dw by mpmath quadrature
C2_ORACLE = [
    (3.0, 1.0, 1.0, 3.4939394022668291),
    (0.5, 1.0, 1.0, 1.872043910667738),
    (1.0, 0.01, 100.0, 1.0000000016666667),
    (3.0, 100.0, 0.01, 30000.000000000006),
]

baths = st.builds(
    BathSpec,
    st.sampled_from([0.3, 0.5, 0.8, 1.0, 1.5, 2.5, 3.0, 4.0]),
    st.floats(1e-2, 1e2),
    st.floats(1e-2, 1e2),
)


def test_bathspec_validation():
    for bad in [(0, 1, 0), (-1, 1, 0), (1, 0, 0), (1, 1, -1), (math.nan, 1, 0), (1, math.inf, 0)]:
        with pytest.raises(DomainError):
            BathSpec(*bad)
    b = BathSpec(1, 2)
    assert b.temperature == 0.0
    assert b.replace(temperature=3.0) == BathSpec(1, 2, 3.0)


def test_gamma_result_invariants():
    with pytest.raises(ArithmeticError):
        GammaResult(-1.0, Method.SERIES, 0.0)
    with pytest.raises(ArithmeticError):
        GammaResult(1.0, Method.SERIES, math.inf)


def test_spectral_density_examples():
    for s in (0.5, 1.0, 3.0):
        np.testing.assert_allclose(spectral_density(2.0, BathSpec(s, 2.0)), 2.0 * math.exp(-1), rtol=1e-15)
    assert spectral_density(0.0, BathSpec(1.0, 1.0)) == 0.0
    np.testing.assert_allclose(spectral_density(2.0, BathSpec(3, 1)), 8 * math.exp(-2), rtol=1e-15)
    np.testing.assert_allclose(spectral_density(2.0, BathSpec(3, 1)), 1.0826822, rtol=1e-7)
    with pytest.raises(DomainError):
        spectral_density(-1.0, BathSpec(1, 1))


@pytest.mark.parametrize("s, wc, temp, tau, expected", GAMMA_ORACLE)
@pytest.mark.parametrize("method", ["auto", "series", "quadrature"])
def test_gamma_oracle(s, wc, temp, tau, expected, method):
    np.testing.assert_allclose(gamma(tau, BathSpec(s, wc, temp), method=method).value, expected, rtol=1e-11)


@pytest.mark.parametrize("method", ["auto", "closed", "series", "quadrature"])
def test_gamma_zero_at_tau_zero(method):
    for bath in (BathSpec(0.5, 1, 1), BathSpec(3, 1e-2, 1e2), BathSpec(1, 1, 0)):
        assert gamma(0.0, bath, method=method).value == 0.0


def test_zero_temperature_limits():
    b = BathSpec(1.0, 3.0)
    tau = np.geomspace(1e-3, 1e3, 13)
    np.testing.assert_allclose(gamma_zero_temperature(tau, b), 0.5 * np.log1p((3 * tau) ** 2), rtol=1e-14)
    # s = 3 saturates at Gamma_e(2) = 1
    np.testing.assert_allclose(gamma_zero_temperature(1e6, BathSpec(3, 1)).value, 1.0, rtol=1e-11)
    r = gamma_zero_temperature(0.5, BathSpec(3, 1))
    assert r.method is Method.ZERO_TEMPERATURE


def test_zero_temperature_continuous_in_s():
    tau = np.geomspace(1e-2, 1e2, 9)
    for s0 in (1.0, 2.0):
        lo = gamma_zero_temperature(tau, BathSpec(s0 - 1e-7, 1.0))
        hi = gamma_zero_temperature(tau, BathSpec(s0 + 1e-7, 1.0))
        mid = gamma_zero_temperature(tau, BathSpec(s0, 1.0))
        np.testing.assert_allclose(lo, mid, rtol=1e-6)
        np.testing.assert_allclose(hi, mid, rtol=1e-6)


def test_closed_form_singular_band():
    with pytest.raises(SingularParameterError):
        gamma_closed_form(1.0, BathSpec(1.0005, 1, 1))
    with pytest.raises(SingularParameterError):
        gamma_closed_form(1.0, BathSpec(2.0, 1, 1))
    # the automatic route falls back to the image series there
    r = gamma(1.0, BathSpec(1.0005, 1, 1))
    assert r.method is Method.SERIES
    np.testing.assert_allclose(r.value, gamma_quadrature(1.0, BathSpec(1.0005, 1, 1)).value, rtol=1e-9)


def test_closed_form_exactly_ohmic_matches_quadrature():
    b = BathSpec(1.0, 0.7, 2.0)
    tau = np.geomspace(1e-2, 1e2, 7)
    np.testing.assert_allclose(gamma_closed_form(tau, b), gamma_quadrature(tau, b), rtol=1e-10)


def test_series_requires_temperature():
    with pytest.raises(DomainError):
        gamma_series(1.0, BathSpec(1, 1, 0))


def test_series_single_term_identity():
    # at T = omega_c the first image has cutoff omega_c / 2 and weight (1/2)^(s - 1)
    b = BathSpec(3.0, 1.0, 1.0)
    tau = 0.8
    first = 2 * 0.5**2 * gamma_zero_temperature(tau, BathSpec(3.0, 0.5)).value
    images = [2 * (1 / (1 + n)) ** 2 * gamma_zero_temperature(tau, BathSpec(3.0, 1 / (1 + n))).value for n in range(1, 200000)]
    assert images[0] == first
    total = gamma_zero_temperature(tau, b).value + math.fsum(images)
    np.testing.assert_allclose(gamma_series(tau, b).value, total, rtol=1e-9)


def test_series_cap_raises():
    with pytest.raises(NonConvergenceError):
        gamma_series(1.0, BathSpec(0.5, 1.0, 1.0), tol=1e-300, max_terms=100)


def test_quadrature_zero_temperature_cross_oracle():
    b = BathSpec(3.0, 1.0, 0.0)
    np.testing.assert_allclose(gamma_quadrature(1.0, b).value, gamma_zero_temperature(1.0, b).value, rtol=1e-8)


def test_quadrature_linear_in_high_temperature():
    temps = np.geomspace(1e2, 1e4, 9)
    g = [gamma_quadrature(1.0, BathSpec(1.0, 1.0, t)).value for t in temps]
    slope = np.polyfit(np.log(temps), np.log(g), 1)[0]
    np.testing.assert_allclose(slope, 1.0, atol=1e-2)


def test_quadrature_error_estimate_is_honest():
    r = gamma_quadrature(3.0, BathSpec(0.5, 1.0, 1.0), tol=1e-6)
    exact = gamma(3.0, BathSpec(0.5, 1.0, 1.0)).value
    assert abs(r.value - exact) <= max(r.err_estimate, 1e-6 * exact)


def test_unknown_method():
    with pytest.raises(DomainError):
        gamma(1.0, BathSpec(1, 1, 1), method="simpson")


def test_gamma_values_matches_scalar():
    b = BathSpec(0.5, 2.0, 0.3)
    tau = np.geomspace(1e-2, 1e2, 11)
    np.testing.assert_allclose(gamma_values(tau, b), [gamma(t, b).value for t in tau], rtol=1e-15)


@given(baths, st.floats(1e-3, 1e3))
def test_closed_form_matches_series(bath, tau):
    a = gamma(tau, bath).value
    b = gamma(tau, bath, method="series").value
    assert abs(a - b) <= max(1e-10, 1e-9 * abs(a))


@given(baths, st.floats(1e-2, 1e2), st.floats(1.01, 100.0))
def test_monotone_in_temperature(bath, tau, factor):
    lo = gamma(tau, bath).value
    hi = gamma(tau, bath.replace(temperature=bath.temperature * factor)).value
    assert hi >= lo * (1 - 1e-12) >= 0


@given(st.sampled_from([0.5, 1.0, 1.5, 2.0]), st.floats(1e-2, 1e2), st.floats(0, 1e2))
def test_monotone_in_tau_for_s_up_to_two(s, wc, temp):
    tau = np.geomspace(1e-2, 1e2, 40)
    g = gamma_values(tau, BathSpec(s, wc, temp))
    assert np.all(np.diff(g) >= -1e-12 * g[1:])


@pytest.mark.parametrize("s, wc, temp, expected", C2_ORACLE)
def test_short_time_coeff_oracle(s, wc, temp, expected):
    np.testing.assert_allclose(gamma_short_time_coeff(BathSpec(s, wc, temp)), expected, rtol=1e-12)


def test_short_time_coeff_quadrature_limit():
    b = BathSpec(3.0, 1.0, 1.0)
    np.testing.assert_allclose(gamma_quadrature(1e-4, b).value / 1e-8, gamma_short_time_coeff(b), rtol=1e-4)


def test_short_time_coeff_second_difference():
    b = BathSpec(3.0, 1.0, 1.0)
    h = 1e-3
    # Gamma is even in tau, so the centred second difference at 0 is 2 Gamma(h) / h^2
    second = 2 * gamma_closed_form(h, b).value / h**2
    np.testing.assert_allclose(second, 2 * gamma_short_time_coeff(b), rtol=1e-5)


def test_short_time_coeff_increases_with_temperature():
    c = [gamma_short_time_coeff(BathSpec(3.0, 1.0, t)) for t in np.geomspace(1e-2, 1e3, 30)]
    assert np.all(np.diff(c) > 0)


def test_derivative_ohmic_zero_temperature():
    np.testing.assert_allclose(dgamma_domegac(1.0, BathSpec(1, 1, 0)), 0.5, rtol=1e-10)
    assert dgamma_domegac(0.0, BathSpec(3, 1, 1)) == 0.0


@pytest.mark.parametrize("s, wc, temp, tau, expected", DGAMMA_ORACLE)
def test_derivative_oracle(s, wc, temp, tau, expected):
    b = BathSpec(s, wc, temp)
    np.testing.assert_allclose(dgamma_domegac(tau, b), expected, rtol=1e-9)
    np.testing.assert_allclose(dgamma_domegac_quadrature(tau, b), expected, rtol=1e-8)


def test_derivative_finite_difference_vs_quadrature():
    b = BathSpec(3.0, 1.0, 1.0)
    np.testing.assert_allclose(dgamma_domegac(1.0, b), dgamma_domegac_quadrature(1.0, b), rtol=1e-5)


@pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("wc", [1e-2, 1.0, 1e2])
@pytest.mark.parametrize("temp", [0.0, 1e-2, 1.0, 1e2])
def test_derivative_grid(s, wc, temp):
    # the stencil resolves d Gamma / d omega_c to ~1e-9 of Gamma / omega_c;
    # where the derivative is much smaller than that, only the absolute floor applies
    b = BathSpec(s, wc, temp)
    tau = np.geomspace(1e-2, 1e2, 5)
    fd = dgamma_domegac_values(tau, b)[0]
    ref = np.array([dgamma_domegac_quadrature(t, b) for t in tau])
    floor = 1e-8 * gamma_values(tau, b) / wc
    assert np.all(np.abs(fd - ref) <= 1e-5 * np.abs(ref) + floor)


@pytest.mark.parametrize("s, expected", [(0.5, 1.5), (1.0, 1.0), (3.0, 0.0)])
def test_asymptotic_slope(s, expected):
    slope = asymptotic_slope(BathSpec(s, 1.0, 1.0), (1e2, 1e4))
    np.testing.assert_allclose(slope, expected, atol=0.05)


def test_asymptotic_slope_window_check():
    with pytest.raises(DegenerateWindowError):
        asymptotic_slope(BathSpec(1, 1, 1), (1e2, 5e3))
