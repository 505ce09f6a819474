"""Decoherence function of a qubit dephased by an Ohmic-class bath.

Units: frequencies, times and temperatures are all in units of the probe
frequency, with hbar = k_B = 1.

Three independent evaluators are provided for ``Gamma_s(tau, T, omega_c)``:

* :func:`gamma_closed_form` -- zero-temperature part plus Hurwitz zeta sums,
* :func:`gamma_series` -- the image series obtained from expanding ``coth``,
* :func:`gamma_quadrature` -- adaptive Gauss-Kronrod on the defining integral.

:func:`gamma` picks one automatically; :func:`gamma_values` is the vectorised
entry point used by the estimation and optimisation layers.
"""
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from . import kernels
from ._jit import USE_NUMBA
from .errors import (
    DegenerateWindowError,
    DomainError,
    NonConvergenceError,
    SingularParameterError,
    StepCollapseError,
)
from .specfun import euler_gamma, gamma_times_one_minus_re_pow, hurwitz_zeta

__all__ = [
    "BathSpec",
    "GammaResult",
    "Method",
    "EPS_S",
    "spectral_density",
    "gamma_zero_temperature",
    "gamma_closed_form",
    "gamma_series",
    "gamma_quadrature",
    "gamma",
    "gamma_values",
    "gamma_short_time_coeff",
    "dgamma_domegac",
    "dgamma_domegac_values",
    "dgamma_domegac_quadrature",
    "asymptotic_slope",
]

#: Half-width of the neighbourhoods of s = 1 and s = 2 where the closed form
#: is not used.
EPS_S = 1e-3

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_SERIES_TOL = 1e-12
DEFAULT_SERIES_CAP = 10**6
DEFAULT_QUAD_PANELS = 20_000_000


@dataclass(frozen=True)
class BathSpec:
    """Bath parameters in probe-frequency units."""

    s: float
    omega_c: float
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("s", "omega_c", "temperature"):
            v = getattr(self, name)
            if not isinstance(v, (int, float, np.floating, np.integer)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.s <= 0:
            raise DomainError(f"ohmicity s must be > 0, got {self.s}")
        if self.omega_c <= 0:
            raise DomainError(f"omega_c must be > 0, got {self.omega_c}")
        if self.temperature < 0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature}")

    def replace(self, **changes):
        return BathSpec(**{**self.__dict__, **changes})


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    SERIES = "series"
    QUADRATURE = "quadrature"
    ZERO_TEMPERATURE = "zero_temperature"


@dataclass(frozen=True)
class GammaResult:
    value: float
    method: Method
    err_estimate: float

    def __post_init__(self):
        if not (self.value >= 0.0 and math.isfinite(self.value)):
            raise ArithmeticError(f"decoherence function must be finite and >= 0, got {self.value}")
        if not math.isfinite(self.err_estimate):
            raise ArithmeticError("non-finite error estimate")


def _check_tau(tau):
    t = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise DomainError("interaction time tau must be finite and >= 0")
    return t


def _clip(value, err):
    # roundoff may leave a value a hair below zero at tiny tau
    return np.where((value < 0) & (-value <= err + 1e-300), 0.0, value)


def spectral_density(omega, bath):
    """``J_s(omega) = omega_c (omega/omega_c)**s exp(-omega/omega_c)``."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectral density is defined for omega >= 0")
    x = w / bath.omega_c
    out = bath.omega_c * x**bath.s * np.exp(-x)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# evaluators
# --------------------------------------------------------------------------


def gamma_zero_temperature(tau, bath):
    """Zero-temperature decoherence function.

    ``Gamma_e(s-1) * {1 - cos[(s-1) atan(omega_c tau)] / (1 + omega_c^2 tau^2)^((s-1)/2)}``,
    evaluated without cancellation; at ``s = 1`` it is ``log(1 + omega_c^2 tau^2)/2``.
    ``bath.temperature`` is ignored.
    """
    t = _check_tau(tau)
    v = np.asarray(gamma_times_one_minus_re_pow(bath.s - 1.0, bath.omega_c * t))
    v = _clip(v, 1e-15 * np.abs(v))
    if t.ndim == 0:
        v = float(v)
        return GammaResult(v, Method.ZERO_TEMPERATURE, 1e-15 * v)
    return v


def _closed_form_singular(s):
    return (0.0 < abs(s - 1.0) < EPS_S) or abs(s - 2.0) < EPS_S


def _closed_form_arrays(t, bath):
    t = np.ascontiguousarray(t, dtype=float)
    if USE_NUMBA:
        v, e = kernels.closed_form_nb(t, bath.s, bath.omega_c, bath.temperature)
    else:
        v, e = kernels.closed_form_np(t, bath.s, bath.omega_c, bath.temperature)
    return _clip(v, e), e


def gamma_closed_form(tau, bath):
    """Decoherence function from the Hurwitz-zeta closed form.

    At ``T = 0`` this delegates to :func:`gamma_zero_temperature`. Exactly at
    ``s = 1`` the thermal part is its analytic limit
    ``2 [log Gamma(1 + T/omega_c) - Re log Gamma(1 + T/omega_c + i T tau)]``.

    Raises
    ------
    SingularParameterError
        For ``0 < |s - 1| < EPS_S`` or ``|s - 2| < EPS_S``; use
        :func:`gamma_series` there (:func:`gamma` does so automatically).
    """
    if bath.temperature == 0.0:
        return gamma_zero_temperature(tau, bath)
    if _closed_form_singular(bath.s):
        raise SingularParameterError(f"closed form is singular near s = {bath.s}")
    t = _check_tau(tau)
    v, e = _closed_form_arrays(np.atleast_1d(t), bath)
    if t.ndim == 0:
        return GammaResult(float(v[0]), Method.CLOSED_FORM, float(e[0]))
    return v


def _series_arrays(t, bath, tol, max_terms):
    t = np.ascontiguousarray(t, dtype=float)
    args = (t, bath.s, bath.omega_c, bath.temperature, float(tol), int(max_terms))
    if USE_NUMBA:
        v, e, _, status = kernels.series_nb(*args)
    else:
        v, e, _, status = kernels.series_np(*args)
    if status != kernels.STATUS_OK:
        raise NonConvergenceError(f"image series did not reach tol={tol} within {max_terms} terms")
    return _clip(v, e), e


def gamma_series(tau, bath, tol=DEFAULT_SERIES_TOL, max_terms=DEFAULT_SERIES_CAP):
    """Decoherence function from the ``coth`` image series.

    ``Gamma_s(tau, T, w) = Gamma_s(tau, 0, w)
    + 2 sum_n (T/(T + n w))**(s-1) Gamma_s(tau, 0, T w/(T + n w))``.

    The first ``N - 1`` images (``N = 64, 256, ...``) are summed directly; the
    rest is the Euler-Maclaurin integral of the continuous term function plus
    its Bernoulli corrections, which are all elementary. ``N`` grows until
    the last correction falls below ``1e-2 * tol`` of the total; the error
    estimate is that last correction.
    """
    if bath.temperature <= 0.0:
        raise DomainError("the image series needs T > 0; use gamma_zero_temperature")
    if tol <= 0:
        raise DomainError("tol must be > 0")
    t = _check_tau(tau)
    v, e = _series_arrays(np.atleast_1d(t), bath, tol, max_terms)
    if t.ndim == 0:
        return GammaResult(float(v[0]), Method.SERIES, float(e[0]))
    return v


def _quad_edges(tau, bath, tol, upper_x):
    """Panel edges for the quadrature of the decoherence integrand.

    Geometric panels grade towards the origin (where the integrand behaves
    as ``omega**(alpha - 1)``) and towards ``omega_lo``; beyond that,
    uniform panels no wider than a quarter oscillation period or half a
    cutoff frequency run up to ``upper_x * omega_c``.
    """
    s, wc, temp = bath.s, bath.omega_c, bath.temperature
    alpha = s if temp > 0 else s + 1.0
    lo = min(s * wc, 1.0 / tau, 2.0 * temp if temp > 0 else math.inf)
    delta = (1e-2 * tol) ** (1.0 / (alpha + 1.0))
    n_down = max(1, int(math.ceil(math.log2(1.0 / delta))))
    down = lo * 2.0 ** -np.arange(n_down, -1, -1, dtype=float)
    width = min(0.5 * math.pi / tau, 0.5 * wc)
    top = upper_x * wc
    up = [lo]
    while up[-1] < top and up[-1] < width:
        up.append(min(2.0 * up[-1], top))
    start = up[-1]
    if start < top:
        n_uni = int(math.ceil((top - start) / width))
        if n_uni > DEFAULT_QUAD_PANELS:
            raise NonConvergenceError(
                f"quadrature would need {n_uni} panels (omega_c tau too large)"
            )
        uni = np.linspace(start, top, n_uni + 1)[1:]
    else:
        uni = np.empty(0)
    edges = np.concatenate([down, np.array(up[1:]), uni])
    return edges, alpha


def _tail_bound(tau, bath, x):
    """Upper bound on the integral beyond ``x * omega_c``.

    Uses ``t**(k) exp(-t) <= x**k exp(-x) exp(-(t - x)/2)`` for
    ``t >= x >= 2k``, and the better of ``1 - cos <= 2`` and
    ``1 - cos <= (omega tau)^2 / 2``.
    """
    s, wc, temp = bath.s, bath.omega_c, bath.temperature
    w = x * wc
    coth = 1.0 / math.tanh(0.5 * w / temp) if temp > 0 else 1.0
    b_osc = 4.0 * x ** (s - 2.0) * math.exp(-x)
    b_small = (wc * tau) ** 2 * x**s * math.exp(-x)
    return coth * min(b_osc, b_small)


def _quadrature(tau, bath, tol, kind, max_panels=DEFAULT_QUAD_PANELS):
    if tau == 0.0:
        return 0.0, 0.0
    upper_x = 2.0 * bath.s + 45.0
    edges, alpha = _quad_edges(tau, bath, tol, upper_x)
    args = (kind, float(tau), bath.s, bath.omega_c, bath.temperature, float(tol), int(max_panels))
    if USE_NUMBA:
        val, err, _, status = kernels.adaptive_gk_nb(np.ascontiguousarray(edges), *args)
    else:
        val, err, _, status = kernels.adaptive_gk_np(edges, *args)
    if status != kernels.STATUS_OK:
        raise NonConvergenceError(f"quadrature failed to reach tol={tol} (status {status})")
    # leading-order piece on [0, edges[0]]: integrand ~ C omega**(alpha - 1)
    eps = edges[0]
    f_eps = float(
        kernels.integrand_np(np.array([eps]), kind, float(tau), bath.s, bath.omega_c, bath.temperature)[0]
    )
    head = eps * f_eps / alpha
    val += head
    err += abs(head) * eps / edges[-1] + _tail_bound(tau, bath, upper_x)
    return val, err


def gamma_quadrature(tau, bath, tol=DEFAULT_QUAD_TOL):
    """Decoherence function by direct quadrature of its defining integral.

    ``int_0^inf J_s(w) (1 - cos w tau) / w^2 coth(w / 2T) dw`` (``coth -> 1``
    at ``T = 0``), to relative accuracy ``tol``. This is the reference the
    other evaluators are checked against.
    """
    if tol <= 0:
        raise DomainError("tol must be > 0")
    t = _check_tau(tau)
    if t.ndim == 0:
        v, e = _quadrature(float(t), bath, tol, kernels.KIND_GAMMA)
        return GammaResult(max(v, 0.0), Method.QUADRATURE, e)
    return np.array([_quadrature(float(x), bath, tol, kernels.KIND_GAMMA)[0] for x in t.ravel()]).reshape(
        t.shape
    )


def _auto_method(bath):
    if bath.temperature == 0.0:
        return Method.ZERO_TEMPERATURE
    if _closed_form_singular(bath.s):
        return Method.SERIES
    return Method.CLOSED_FORM


def gamma(tau, bath, method="auto", tol=None):
    """Decoherence function as a :class:`GammaResult`.

    ``method`` is one of ``"auto"``, ``"closed"``/``"closed_form"``,
    ``"series"`` or ``"quadrature"``. ``auto`` uses the zero-temperature
    formula at ``T = 0``, the closed form elsewhere, and the image series
    close to ``s = 1`` and ``s = 2``.
    """
    m = str(getattr(method, "value", method))
    if m == "auto":
        m = _auto_method(bath).value
    if m == "zero_temperature":
        return gamma_zero_temperature(tau, bath)
    if m in ("closed", "closed_form"):
        return gamma_closed_form(tau, bath)
    if m == "series":
        if bath.temperature == 0.0:
            return gamma_zero_temperature(tau, bath)
        return gamma_series(tau, bath, tol=tol or DEFAULT_SERIES_TOL)
    if m == "quadrature":
        return gamma_quadrature(tau, bath, tol=tol or DEFAULT_QUAD_TOL)
    raise DomainError(f"unknown method {method!r}")


def gamma_values(tau, bath):
    """Vectorised :func:`gamma` (auto route); returns a float array."""
    t = np.atleast_1d(_check_tau(tau))
    m = _auto_method(bath)
    if m is Method.ZERO_TEMPERATURE:
        return np.asarray(gamma_zero_temperature(t, bath), dtype=float)
    if m is Method.SERIES:
        return _series_arrays(t, bath, DEFAULT_SERIES_TOL, DEFAULT_SERIES_CAP)[0]
    return _closed_form_arrays(t, bath)[0]


# --------------------------------------------------------------------------
# derived quantities
# --------------------------------------------------------------------------


def gamma_short_time_coeff(bath):
    """Coefficient ``c2`` of the short-time law ``Gamma_s ~ c2 tau^2``.

    ``c2 = omega_c^2 Gamma_e(s+1) / 2 * [2 a^(s+1) zeta(s+1, a) - 1]`` with
    ``a = T / omega_c``; at ``T = 0`` the bracket is 1.
    """
    s, wc, temp = bath.s, bath.omega_c, bath.temperature
    bracket = 1.0
    if temp > 0:
        a = temp / wc
        # a^(s+1) zeta(s+1, a) = 1 + a^(s+1) zeta(s+1, 1 + a)
        bracket = 1.0 + 2.0 * a ** (s + 1.0) * hurwitz_zeta(s + 1.0, 1.0 + a).real
    return 0.5 * wc * wc * euler_gamma(s + 1.0) * bracket


_FD_REL_STEP = 1e-4


def dgamma_domegac_values(tau, bath):
    """Vectorised ``d Gamma_s / d omega_c`` (no step-collapse check).

    Five-point central differences with step ``h = 1e-4 omega_c`` and one
    Richardson step between ``h`` and ``h/2``.
    """
    t = np.atleast_1d(_check_tau(tau))
    wc = bath.omega_c
    h = _FD_REL_STEP * wc

    def stencil(step):
        f = {k: gamma_values(t, bath.replace(omega_c=wc + k * step)) for k in (-2, -1, 1, 2)}
        return (f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * step), f

    d1, f1 = stencil(h)
    d2, f2 = stencil(0.5 * h)
    d = (16.0 * d2 - d1) / 15.0
    return np.where(t == 0.0, 0.0, d), (f1, f2)


def dgamma_domegac(tau, bath):
    """``d Gamma_s / d omega_c`` at one interaction time.

    Raises
    ------
    StepCollapseError
        If all stencil values coincide although ``Gamma > 0``.
    """
    t = _check_tau(tau)
    if t.ndim != 0:
        return dgamma_domegac_values(t, bath)[0]
    if float(t) == 0.0:
        return 0.0
    d, (f1, f2) = dgamma_domegac_values(t, bath)
    vals = np.concatenate([np.concatenate(list(f.values())) for f in (f1, f2)])
    if np.all(vals == vals[0]) and vals[0] > 0:
        raise StepCollapseError(f"stencil values indistinguishable at tau={float(t)}")
    return float(d[0])


def dgamma_domegac_quadrature(tau, bath, tol=DEFAULT_QUAD_TOL):
    """Reference ``d Gamma_s / d omega_c``: quadrature of the differentiated integrand.

    ``d J_s / d omega_c = [(1 - s)/omega_c + omega/omega_c^2] J_s``.
    """
    t = float(_check_tau(tau))
    return _quadrature(t, bath, tol, kernels.KIND_DOMEGAC)[0]


def asymptotic_slope(bath, tau_window, n_points=25):
    """Least-squares slope of ``log Gamma`` against ``log tau`` over a window.

    The window should sit in the long-time regime, i.e. its lower edge well
    above ``max(1/omega_c, 1/T)``.
    """
    lo, hi = float(tau_window[0]), float(tau_window[1])
    if not (0 < lo < hi) or math.log10(hi / lo) < 2.0:
        raise DegenerateWindowError("tau window must span at least two decades")
    n_points = max(int(n_points), 20)
    t = np.geomspace(lo, hi, n_points)
    g = gamma_values(t, bath)
    slope, _ = np.polyfit(np.log(t), np.log(g), 1)
    return float(slope)
