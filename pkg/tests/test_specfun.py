import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ohmic_probe.errors import DomainError, PoleError
from ohmic_probe.specfun import (
    bernoulli_numbers,
    euler_gamma,
    gamma_times_one_minus_re_pow,
    hurwitz_zeta,
    log_abs_gamma_ratio,
    one_minus_re_pow,
)

# frozen with mpmath at 30 digits
ZETA_ORACLE = [
    (2, 1, complex(1.6449340668482264, 0.0)),
    (0.5, (2 + 3j), complex(-3.1155202288161595, -1.9222701830725214)),
    (-0.5, 1, complex(-0.20788622497735457, 0.0)),
    (-0.5, (1.5 + 20j), complex(38.964946306746231, -45.289995636493989)),
    (2.5, (0.3 + 0.1j), complex(13.10205045004288, -12.929727397615015)),
    (-1, (3 + 4j), complex(4.9166666666666667, -10.0)),
    (4, 0.01, complex(100000001.04184364, 0.0)),
    (0.3, (100 + 1000j), complex(-92.887130185156669, -154.72738252991811)),
]

GAMMA_ORACLE = [
    (0.5, 1.772453850905516),
    (2.0, 1.0),
    (-0.5, -3.5449077018110321),
    (0.1, 9.5135076986687313),
    (7.3, 1271.4236336639088),
    (-2.7, -0.93108278483896397),
    (25.5, 3.0867705405286968e24),
    (1e-07, 9999999.4227844345),
]


def test_euler_gamma_known_values():
    np.testing.assert_allclose(euler_gamma(0.5), math.sqrt(math.pi), rtol=1e-14)
    np.testing.assert_allclose(euler_gamma(2.0), 1.0, rtol=1e-14)
    np.testing.assert_allclose(euler_gamma(-0.5), -2 * math.sqrt(math.pi), rtol=1e-14)


@pytest.mark.parametrize("z, expected", GAMMA_ORACLE)
def test_euler_gamma_oracle(z, expected):
    np.testing.assert_allclose(euler_gamma(z), expected, rtol=1e-12)


def test_euler_gamma_array():
    z = np.array([0.5, 2.0, 3.5])
    np.testing.assert_allclose(euler_gamma(z), [math.gamma(v) for v in z], rtol=1e-13)


@pytest.mark.parametrize("z", [0.0, -1.0, -2.0, -7.0])
def test_euler_gamma_poles(z):
    with pytest.raises(PoleError):
        euler_gamma(z)


@given(st.floats(0.1, 10.0))
def test_gamma_functional_equation(z):
    assert abs(euler_gamma(z + 1) - z * euler_gamma(z)) <= 1e-12 * abs(z * euler_gamma(z))


@given(st.floats(-5.9, 0.45).filter(lambda z: abs(z - round(z)) > 1e-3))
def test_gamma_reflection_region(z):
    np.testing.assert_allclose(euler_gamma(z), float(mpmath.gamma(z)), rtol=1e-12)


def test_bernoulli_numbers():
    b = bernoulli_numbers(12)
    assert [str(x) for x in b[:7]] == ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42"]
    assert str(b[12]) == "-691/2730"


def test_hurwitz_basel():
    np.testing.assert_allclose(hurwitz_zeta(2, 1 + 0j).real, math.pi**2 / 6, rtol=1e-14)


@pytest.mark.parametrize("q0", [2.0, 0.7 + 3j, 15.0 - 40j])
def test_hurwitz_p_zero(q0):
    np.testing.assert_allclose(hurwitz_zeta(0, q0), 0.5 - q0, rtol=1e-13)


def test_hurwitz_riemann_half():
    np.testing.assert_allclose(hurwitz_zeta(-0.5, 1).real, -0.2078862250, rtol=1e-9)


@pytest.mark.parametrize("p, q, expected", ZETA_ORACLE)
def test_hurwitz_oracle(p, q, expected):
    np.testing.assert_allclose(hurwitz_zeta(p, q), expected, rtol=1e-12)


def test_hurwitz_error_estimate():
    value, err = hurwitz_zeta(0.5, 2 + 3j, return_error=True)
    assert 0 <= err <= 1e-12 * abs(value)


def test_hurwitz_array_input():
    q = np.array([1.0 + 0j, 2.0 + 1j])
    out = hurwitz_zeta(2.5, q)
    np.testing.assert_allclose(out, [complex(mpmath.zeta(2.5, v)) for v in q], rtol=1e-13)


def test_hurwitz_pole_and_domain():
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0, 2.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, -0.5 + 1j)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(math.nan, 1.0)


finite_p = st.floats(-1.0, 3.0).filter(lambda p: abs(p - 1.0) > 1e-6)
right_half = st.builds(complex, st.floats(0.05, 50.0), st.floats(-200.0, 200.0))


@given(finite_p, right_half)
def test_hurwitz_recurrence(p, q):
    lhs = hurwitz_zeta(p, q) - hurwitz_zeta(p, q + 1)
    rhs = q ** (-p)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1e-300) + 1e-12 * abs(hurwitz_zeta(p, q))


@given(finite_p, right_half)
def test_hurwitz_conjugate_symmetry(p, q):
    a = hurwitz_zeta(p, q.conjugate())
    b = hurwitz_zeta(p, q).conjugate()
    assert abs(a - b) <= 1e-13 * max(abs(a), 1e-300)


@given(finite_p, right_half)
def test_hurwitz_against_mpmath(p, q):
    expected = complex(mpmath.zeta(p, q))
    assert abs(hurwitz_zeta(p, q) - expected) <= 1e-10 * abs(expected) + 1e-14


@given(st.floats(-1.9, 4.0), st.floats(0.0, 1e4))
def test_gamma_times_bracket_against_mpmath(q, y):
    digits = 40 + (int(-2 * math.log10(y)) if y > 0 else 0)
    with mpmath.workdps(digits):
        bracket = 1 - mpmath.re((1 + 1j * mpmath.mpf(y)) ** (-mpmath.mpf(q)))
        if abs(q) < 1e-12:
            expected = 0.5 * mpmath.log1p(mpmath.mpf(y) ** 2)
        elif abs(q + 1) < 1e-12:
            expected = y * mpmath.atan(y) - 0.5 * mpmath.log1p(mpmath.mpf(y) ** 2)
        else:
            expected = mpmath.gamma(q) * bracket
    got = gamma_times_one_minus_re_pow(q, y)
    assert abs(got - float(expected)) <= 1e-12 * abs(float(expected)) + 1e-300


def test_bracket_small_y_no_cancellation():
    # 1 - Re(1 + iy)^(-q) ~ q (q + 1) y^2 / 2
    np.testing.assert_allclose(one_minus_re_pow(2.0, 1e-9), 3.0 * 1e-18, rtol=1e-12)


def test_gamma_bracket_continuous_at_poles():
    for q0 in (0.0, -1.0):
        left = gamma_times_one_minus_re_pow(q0 - 1e-7, 3.0)
        right = gamma_times_one_minus_re_pow(q0 + 1e-7, 3.0)
        mid = gamma_times_one_minus_re_pow(q0, 3.0)
        np.testing.assert_allclose([left, right], [mid, mid], rtol=1e-5)


@given(st.floats(0.01, 200.0), st.floats(-500.0, 500.0))
def test_log_abs_gamma_ratio(x, b):
    expected = float(mpmath.re(mpmath.loggamma(mpmath.mpc(x, b)) - mpmath.loggamma(x)))
    assert abs(log_abs_gamma_ratio(x, b) - expected) <= 1e-12 * max(1.0, abs(expected))
