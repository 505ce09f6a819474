"""Real Gamma function and Hurwitz zeta with complex shift.

The Hurwitz zeta is continued analytically in its first argument by
Euler-Maclaurin summation, so exponents ``p < 1`` (where the defining series
diverges) are handled on the same footing as ``p > 1``.

Besides the two public functions this module holds a few cancellation-free
helpers used by the decoherence kernels:

``one_minus_re_pow(q, y)``
    ``1 - Re (1 + i y)**(-q)``
``gamma_times_one_minus_re_pow(q, y)``
    ``Gamma(q) * (1 - Re (1 + i y)**(-q))`` with its finite limits at
    ``q = 0`` and ``q = -1``
``log_abs_gamma_ratio(x, b)``
    ``log |Gamma(x + i b) / Gamma(x)|``

Every kernel exists twice: a scalar ``@njit`` version (``*_nb``) and a
vectorised numpy version (``*_np``). :mod:`ohmic_probe._jit` decides which one
the public wrappers call.
"""
import cmath
import math
from fractions import Fraction

import numpy as np

from ._jit import USE_NUMBA, njit
from .errors import DomainError, PoleError

__all__ = [
    "euler_gamma",
    "hurwitz_zeta",
    "bernoulli_numbers",
    "one_minus_re_pow",
    "gamma_times_one_minus_re_pow",
    "log_abs_gamma_ratio",
]


def bernoulli_numbers(n_max):
    """Exact Bernoulli numbers ``B_0 .. B_n_max`` (``B_1 = -1/2``)."""
    # Akiyama-Tanigawa; yields B_1 = +1/2, flipped below.
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n_max >= 1:
        out[1] = -out[1]
    return out


_N_BERN = 15
_B = bernoulli_numbers(2 * _N_BERN)
# B_{2j} / (2j)!  for j = 1..15
_EM_COEF = np.array(
    [float(_B[2 * j] / math.factorial(2 * j)) for j in range(1, _N_BERN + 1)]
)
# B_{2j} / (2j (2j - 1))  for the Stirling series
_STIRLING_COEF = np.array(
    [float(_B[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, _N_BERN + 1)]
)

_LANCZOS_G = 7.0
_LANCZOS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# |q + N| is pushed past this before the Euler-Maclaurin tail is used.
_EM_RADIUS = 15.0


# --------------------------------------------------------------------------
# Gamma
# --------------------------------------------------------------------------


@njit
def _lanczos_nb(z):
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, 9):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * x


@njit
def _gamma_nb(z):
    if z < 0.5:
        # sin(pi z) = (-1)^k sin(pi (z - k)); z - k is exact near the poles
        k = round(z)
        sin_pz = math.sin(math.pi * (z - k))
        if k % 2 != 0:
            sin_pz = -sin_pz
        return math.pi / (sin_pz * _lanczos_nb(1.0 - z))
    return _lanczos_nb(z)


def _lanczos_np(z):
    z = z - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, 9):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * np.exp(-t) * x


def _gamma_np(z):
    z = np.asarray(z, dtype=float)
    refl = z < 0.5
    zz = np.where(refl, 1.0 - z, z)
    lz = _lanczos_np(zz)
    k = np.round(z)
    sin_pz = np.where(np.mod(k, 2.0) != 0, -1.0, 1.0) * np.sin(np.pi * (z - k))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(refl, np.pi / (sin_pz * lz), lz)


def euler_gamma(z):
    """Euler Gamma function of a real argument.

    Lanczos approximation (g = 7, nine coefficients); arguments below 1/2 go
    through the reflection formula. Accepts a scalar or an array.

    Raises
    ------
    PoleError
        If any argument is 0 or a negative integer.
    """
    arr = np.asarray(z, dtype=float)
    if np.any((arr <= 0) & (arr == np.floor(arr))):
        raise PoleError(f"Gamma has a pole at {z!r}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("euler_gamma requires finite arguments")
    if arr.ndim == 0:
        return float(_gamma_nb(float(arr)) if USE_NUMBA else _gamma_np(arr)[()])
    if USE_NUMBA:
        return np.array([_gamma_nb(v) for v in arr.ravel()]).reshape(arr.shape)
    return _gamma_np(arr)


# --------------------------------------------------------------------------
# Hurwitz zeta
# --------------------------------------------------------------------------


@njit
def _hurwitz_nb(p, q):
    n_direct = 0
    if q.real < _EM_RADIUS:
        n_direct = int(math.ceil(_EM_RADIUS - q.real))
    acc = 0j
    for k in range(n_direct):
        acc += cmath.exp(-p * cmath.log(q + k))
    z = q + n_direct
    logz = cmath.log(z)
    zp = cmath.exp(-p * logz)
    acc += z * zp / (p - 1.0) + 0.5 * zp
    rising = p
    zpow = zp / z
    zinv2 = 1.0 / (z * z)
    last = 0.0
    for j in range(_N_BERN):
        term = _EM_COEF[j] * rising * zpow
        acc += term
        last = abs(term)
        if last <= 1e-17 * abs(acc):
            break
        rising *= (p + 2 * j + 1) * (p + 2 * j + 2)
        zpow *= zinv2
    return acc, last + 4e-16 * abs(acc)


@njit
def _hurwitz_array_nb(p, q):
    n = q.shape[0]
    out = np.empty(n, dtype=np.complex128)
    err = np.empty(n)
    for i in range(n):
        v, e = _hurwitz_nb(p, q[i])
        out[i] = v
        err[i] = e
    return out, err


def _hurwitz_np(p, q):
    q = np.asarray(q, dtype=complex)
    n_direct = max(0, int(math.ceil(_EM_RADIUS - float(np.min(q.real))))) if q.size else 0
    acc = np.zeros_like(q)
    for k in range(n_direct):
        acc = acc + np.exp(-p * np.log(q + k))
    z = q + n_direct
    zp = np.exp(-p * np.log(z))
    acc = acc + z * zp / (p - 1.0) + 0.5 * zp
    rising = p
    zpow = zp / z
    zinv2 = 1.0 / (z * z)
    term = np.zeros_like(q)
    for j in range(_N_BERN):
        term = _EM_COEF[j] * rising * zpow
        acc = acc + term
        rising *= (p + 2 * j + 1) * (p + 2 * j + 2)
        zpow = zpow * zinv2
    return acc, np.abs(term) + 4e-16 * np.abs(acc)


def _hurwitz_array(p, q):
    q = np.ascontiguousarray(q, dtype=np.complex128)
    if USE_NUMBA:
        return _hurwitz_array_nb(float(p), q)
    return _hurwitz_np(float(p), q)


def hurwitz_zeta(p, q, return_error=False):
    """Hurwitz zeta ``sum_k (k + q)**(-p)``, analytically continued in ``p``.

    Parameters
    ----------
    p : float
        Real exponent, ``p != 1``.
    q : complex or array of complex
        Shift with ``Re(q) > 0``.
    return_error : bool
        Also return an absolute error estimate.

    Notes
    -----
    The first ``N`` terms are summed directly so that ``Re(q + N) >= 15``;
    the remainder is the Euler-Maclaurin integral plus Bernoulli corrections
    up to ``B_30``, truncated once a correction drops below ``1e-17`` of the
    running sum.
    """
    p = float(p)
    if p == 1.0:
        raise PoleError("hurwitz_zeta has a pole at p = 1")
    if not math.isfinite(p):
        raise DomainError("p must be finite")
    qa = np.asarray(q, dtype=complex)
    if not np.all(np.isfinite(qa)):
        raise DomainError("q must be finite")
    if np.any(qa.real <= 0):
        raise DomainError("hurwitz_zeta requires Re(q) > 0")
    val, err = _hurwitz_array(p, qa.ravel())
    if qa.ndim == 0:
        val, err = complex(val[0]), float(err[0])
    else:
        val, err = val.reshape(qa.shape), err.reshape(qa.shape)
    return (val, err) if return_error else val


# --------------------------------------------------------------------------
# cancellation-free helpers
# --------------------------------------------------------------------------


@njit
def _one_minus_re_pow_nb(q, y):
    if y == 0.0:
        return 0.0
    half_l = 0.5 * math.log1p(y * y)
    th = math.atan(y)
    if q > -0.5:
        x = -q * half_l
        t = -q * th
        s = math.sin(0.5 * t)
        return -(math.expm1(x) * math.cos(t) - 2.0 * s * s)
    # (1 + iy)^(1 + d) = (1 + iy) exp(d log(1 + iy))
    d = -q - 1.0
    x = d * half_l
    t = d * th
    s = math.sin(0.5 * t)
    re_e = math.expm1(x) * math.cos(t) - 2.0 * s * s
    im_e = math.exp(x) * math.sin(t)
    return -(re_e - y * im_e)


def _one_minus_re_pow_np(q, y):
    y = np.asarray(y, dtype=float)
    half_l = 0.5 * np.log1p(y * y)
    th = np.arctan(y)
    if q > -0.5:
        x = -q * half_l
        t = -q * th
        return -(np.expm1(x) * np.cos(t) - 2.0 * np.sin(0.5 * t) ** 2)
    d = -q - 1.0
    x = d * half_l
    t = d * th
    re_e = np.expm1(x) * np.cos(t) - 2.0 * np.sin(0.5 * t) ** 2
    im_e = np.exp(x) * np.sin(t)
    return -(re_e - y * im_e)


@njit
def _bracket_over_q_nb(q, y):
    # (1 - Re (1 + iy)^(-q)) / q, finite as q -> 0 and free of underflow
    half_l = 0.5 * math.log1p(y * y)
    th = math.atan(y)
    x = -q * half_l
    t = -q * th
    e1 = math.expm1(x) / x if x != 0.0 else 1.0
    u = 0.5 * t
    sinc = math.sin(u) / u if u != 0.0 else 1.0
    return half_l * e1 * math.cos(t) - th * math.sin(u) * sinc


def _bracket_over_q_np(q, y):
    half_l = 0.5 * np.log1p(y * y)
    th = np.arctan(y)
    x = -q * half_l
    t = -q * th
    u = 0.5 * t
    with np.errstate(invalid="ignore", divide="ignore"):
        e1 = np.where(x != 0.0, np.expm1(x) / x, 1.0)
        sinc = np.where(u != 0.0, np.sin(u) / u, 1.0)
    return half_l * e1 * np.cos(t) - th * np.sin(u) * sinc


@njit
def _gamma_g_nb(q, y):
    if abs(q) < 0.5:
        # Gamma(q) * bracket = Gamma(q + 1) * (bracket / q)
        return _gamma_nb(q + 1.0) * _bracket_over_q_nb(q, y)
    if q == -1.0:
        return y * math.atan(y) - 0.5 * math.log1p(y * y)
    return _gamma_nb(q) * _one_minus_re_pow_nb(q, y)


def _gamma_g_np(q, y):
    y = np.asarray(y, dtype=float)
    if abs(q) < 0.5:
        return float(_gamma_np(np.float64(q + 1.0))) * _bracket_over_q_np(q, y)
    if q == -1.0:
        return y * np.arctan(y) - 0.5 * np.log1p(y * y)
    return float(_gamma_np(np.float64(q))) * _one_minus_re_pow_np(q, y)


@njit
def _log_abs_gamma_ratio_nb(x, b):
    acc = 0.0
    m = 0
    if x < _EM_RADIUS:
        m = int(math.ceil(_EM_RADIUS - x))
    for k in range(m):
        r = b / (x + k)
        acc -= 0.5 * math.log1p(r * r)
    xx = x + m
    y = b / xx
    acc += (xx - 0.5) * 0.5 * math.log1p(y * y) - b * math.atan(y)
    xpow = 1.0 / xx
    xinv2 = xpow * xpow
    for j in range(_N_BERN):
        term = -_STIRLING_COEF[j] * xpow * _one_minus_re_pow_nb(2.0 * j + 1.0, y)
        acc += term
        if abs(term) <= 1e-17 * abs(acc):
            break
        xpow *= xinv2
    return acc


def _log_abs_gamma_ratio_np(x, b):
    b = np.asarray(b, dtype=float)
    acc = np.zeros_like(b)
    m = max(0, int(math.ceil(_EM_RADIUS - x)))
    for k in range(m):
        r = b / (x + k)
        acc = acc - 0.5 * np.log1p(r * r)
    xx = x + m
    y = b / xx
    acc = acc + (xx - 0.5) * 0.5 * np.log1p(y * y) - b * np.arctan(y)
    xpow = 1.0 / xx
    for j in range(_N_BERN):
        acc = acc - _STIRLING_COEF[j] * xpow * _one_minus_re_pow_np(2.0 * j + 1.0, y)
        xpow /= xx * xx
    return acc


def _apply(nb_func, np_func, first, second):
    arr = np.asarray(second, dtype=float)
    if USE_NUMBA:
        if arr.ndim == 0:
            return float(nb_func(float(first), float(arr)))
        return np.array([nb_func(float(first), v) for v in arr.ravel()]).reshape(arr.shape)
    out = np_func(float(first), arr)
    return float(out) if arr.ndim == 0 else out


def one_minus_re_pow(q, y):
    """``1 - Re (1 + i*y)**(-q)`` without cancellation at small ``y``."""
    return _apply(_one_minus_re_pow_nb, _one_minus_re_pow_np, q, y)


def gamma_times_one_minus_re_pow(q, y):
    """``Gamma(q) * (1 - Re (1 + i*y)**(-q))`` for real ``q > -2``.

    Finite at the Gamma poles ``q = 0`` and ``q = -1``, where the bracket
    vanishes; the limits are ``log(1 + y^2)/2`` and
    ``y*atan(y) - log(1 + y^2)/2``.
    """
    if q <= -2.0:
        raise DomainError("gamma_times_one_minus_re_pow requires q > -2")
    return _apply(_gamma_g_nb, _gamma_g_np, q, y)


def log_abs_gamma_ratio(x, b):
    """``log |Gamma(x + i*b) / Gamma(x)|`` for ``x > 0``."""
    if x <= 0:
        raise DomainError("log_abs_gamma_ratio requires x > 0")
    return _apply(_log_abs_gamma_ratio_nb, _log_abs_gamma_ratio_np, x, b)
