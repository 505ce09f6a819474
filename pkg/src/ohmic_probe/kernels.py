"""Hot loops behind the decoherence evaluators.

Three evaluators of the decoherence function, each in a numba flavour
(``*_nb``, scalar loops) and a numpy flavour (``*_np``, vectorised):

* closed form: zero-temperature part plus the Hurwitz-zeta thermal part;
* image series: the ``coth`` expansion summed term by term, with the tail
  past ``N`` terms added by Euler-Maclaurin;
* adaptive Gauss-Kronrod (7/15) quadrature of the defining integral.

All functions take plain floats (``s``, ``omega_c``, ``temperature``) so that
they compile without object mode. Validation lives in
:mod:`ohmic_probe.decoherence`.
"""
import math

import numpy as np

from ._jit import njit
from .specfun import (
    _EM_COEF,
    _N_BERN,
    _gamma_g_nb,
    _gamma_g_np,
    _gamma_nb,
    _gamma_np,
    _hurwitz_nb,
    _hurwitz_np,
    _log_abs_gamma_ratio_nb,
    _log_abs_gamma_ratio_np,
    _one_minus_re_pow_nb,
    _one_minus_re_pow_np,
)

# Kronrod abscissae on [0, 1) (the node 0 last) and weights; the Gauss
# 7-point rule uses the odd-indexed abscissae.
XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node rule for the vectorised path.
_X15 = np.concatenate([-XGK[:7], XGK[7:], XGK[6::-1]])
_WK15 = np.concatenate([WGK[:7], WGK[7:], WGK[6::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = WG[:3]
_WG15[7] = WG[3]
_WG15[[13, 11, 9]] = WG[:3]

STATUS_OK = 0
STATUS_DEPTH = 1
STATUS_BUDGET = 2

MAX_DEPTH = 60

KIND_GAMMA = 0
KIND_DOMEGAC = 1


# --------------------------------------------------------------------------
# closed form
# --------------------------------------------------------------------------


# Below this ratio T tau / (1 + T/omega_c) the thermal Hurwitz difference is
# summed from its Taylor series in T tau instead of as a difference of two
# nearly equal zeta values.
TAYLOR_RATIO = 0.3
N_TAYLOR = 40


@njit
def _taylor_coefs_nb(p, x):
    # c_m = (-1)^(m+1) (p)_(2m) / (2m)! * zeta(p + 2m, x) * x^(2m), m = 1..N_TAYLOR;
    # assembled in logs so that huge x neither overflows nor yields 0 * inf
    c = np.empty(N_TAYLOR)
    ratio = 1.0
    lx = math.log(x)
    for m in range(1, N_TAYLOR + 1):
        ratio *= (p + 2 * m - 2) * (p + 2 * m - 1) / ((2 * m - 1) * (2 * m))
        z, _ = _hurwitz_nb(p + 2 * m, complex(x, 0.0))
        if ratio == 0.0 or z.real <= 0.0:
            c[m - 1] = 0.0
            continue
        mag = math.exp(math.log(abs(ratio)) + math.log(z.real) + 2 * m * lx)
        c[m - 1] = (-1.0) ** (m + 1) * math.copysign(mag, ratio)
    return c


@njit
def _taylor_sum_nb(c, y):
    acc = 0.0
    y2 = y * y
    yp = y2
    for m in range(N_TAYLOR):
        term = c[m] * yp
        acc += term
        if abs(term) <= 1e-17 * abs(acc):
            break
        yp *= y2
    return acc


@njit
def closed_form_nb(tau, s, omega_c, temperature):
    p = s - 1.0
    a = temperature / omega_c
    n = tau.shape[0]
    out = np.empty(n)
    err = np.empty(n)
    pref = 0.0
    z_real = 0.0
    e_real = 0.0
    coefs = np.zeros(N_TAYLOR)
    if p != 0.0:
        g = _gamma_nb(p)
        pref = s * p * a**p * g * g / _gamma_nb(s + 1.0)
        zr, e_real = _hurwitz_nb(p, complex(1.0 + a, 0.0))
        z_real = zr.real
        coefs = _taylor_coefs_nb(p, 1.0 + a)
    for i in range(n):
        t = tau[i]
        if t == 0.0:
            out[i] = 0.0
            err[i] = 0.0
            continue
        g0 = _gamma_g_nb(p, omega_c * t)
        b = temperature * t
        if p == 0.0:
            therm = -2.0 * _log_abs_gamma_ratio_nb(1.0 + a, b)
            e = 1e-15 * (abs(therm) + abs(g0))
        elif b < TAYLOR_RATIO * (1.0 + a):
            therm = pref * 2.0 * _taylor_sum_nb(coefs, b / (1.0 + a))
            e = 1e-15 * (abs(therm) + abs(g0))
        else:
            zc, ec = _hurwitz_nb(p, complex(1.0 + a, b))
            therm = pref * 2.0 * (z_real - zc.real)
            e = 2.0 * abs(pref) * (e_real + ec) + 1e-15 * abs(g0)
        out[i] = g0 + therm
        err[i] = e
    return out, err


def _taylor_coefs_np(p, x):
    m = np.arange(1, N_TAYLOR + 1)
    ratio = np.cumprod((p + 2 * m - 2) * (p + 2 * m - 1) / ((2 * m - 1) * (2 * m)))
    z = np.array([_hurwitz_np(p + 2 * k, np.array([x + 0j]))[0][0].real for k in m])
    with np.errstate(divide="ignore"):
        mag = np.exp(np.log(np.abs(ratio)) + np.log(np.maximum(z, 0.0)) + 2 * m * math.log(x))
    return (-1.0) ** (m + 1) * np.sign(ratio) * mag


def closed_form_np(tau, s, omega_c, temperature):
    tau = np.asarray(tau, dtype=float)
    p = s - 1.0
    a = temperature / omega_c
    b = temperature * tau
    g0 = _gamma_g_np(p, omega_c * tau)
    if p == 0.0:
        therm = -2.0 * _log_abs_gamma_ratio_np(1.0 + a, b)
        err = 1e-15 * (np.abs(therm) + np.abs(g0))
    else:
        g = float(_gamma_np(np.float64(p)))
        pref = s * p * a**p * g * g / float(_gamma_np(np.float64(s + 1.0)))
        small = b < TAYLOR_RATIO * (1.0 + a)
        diff = np.empty_like(b)
        err = 1e-15 * np.abs(g0)
        if small.any():
            c = _taylor_coefs_np(p, 1.0 + a)
            y2 = (b[small] / (1.0 + a)) ** 2
            diff[small] = (c[None, :] * y2[:, None] ** np.arange(1, N_TAYLOR + 1)[None, :]).sum(axis=1)
        if (~small).any():
            zr, er = _hurwitz_np(p, np.array([1.0 + a + 0j]))
            zc, ec = _hurwitz_np(p, (1.0 + a) + 1j * b[~small])
            diff[~small] = zr.real[0] - zc.real
            err = err.copy()
            err[~small] += 2.0 * abs(pref) * (er[0] + ec)
        therm = pref * 2.0 * diff
        err = err + 1e-15 * np.abs(therm)
    out = g0 + therm
    zero = tau == 0.0
    return np.where(zero, 0.0, out), np.where(zero, 0.0, err)


# --------------------------------------------------------------------------
# image series
# --------------------------------------------------------------------------


@njit
def _series_tail_nb(x, y, a_pow, p, tol, scale):
    """Euler-Maclaurin remainder of the image series from index ``N``.

    ``x = N + T/omega_c`` and ``y = T tau / x``. Returns the remainder, the
    last correction and whether the corrections fell below ``tol * scale``.
    """
    tail = 2.0 * a_pow * x ** (1.0 - p) * _gamma_g_nb(p - 1.0, y)
    tail += a_pow * x ** (-p) * _gamma_g_nb(p, y)
    xpow = x ** (-p - 1.0)
    last = 0.0
    for j in range(_N_BERN):
        k = 2.0 * j + 1.0
        corr = _EM_COEF[j] * 2.0 * a_pow * _gamma_nb(p + k) * xpow * _one_minus_re_pow_nb(p + k, y)
        tail += corr
        last = abs(corr)
        if last <= tol * abs(scale + tail):
            return tail, last, True
        xpow /= x * x
    return tail, last, False


@njit
def series_nb(tau, s, omega_c, temperature, tol, max_terms):
    p = s - 1.0
    a = temperature / omega_c
    a_pow = a**p
    n = tau.shape[0]
    out = np.empty(n)
    err = np.empty(n)
    used = np.zeros(n, dtype=np.int64)
    status = STATUS_OK
    for i in range(n):
        t = tau[i]
        if t == 0.0:
            out[i] = 0.0
            err[i] = 0.0
            continue
        b = temperature * t
        head = _gamma_g_nb(p, omega_c * t)
        done = 0
        n_head = 64
        while True:
            for m in range(done + 1, n_head):
                head += 2.0 * (a / (m + a)) ** p * _gamma_g_nb(p, b / (m + a))
            done = n_head - 1
            x = n_head + a
            tail, last, ok = _series_tail_nb(x, b / x, a_pow, p, 1e-2 * tol, head)
            if ok:
                break
            if n_head * 4 > max_terms:
                status = STATUS_BUDGET
                break
            n_head *= 4
        out[i] = head + tail
        err[i] = last + 1e-15 * abs(head + tail)
        used[i] = n_head
    return out, err, used, status


def series_np(tau, s, omega_c, temperature, tol, max_terms):
    tau = np.asarray(tau, dtype=float)
    p = s - 1.0
    a = temperature / omega_c
    a_pow = a**p
    b = temperature * tau
    head = _gamma_g_np(p, omega_c * tau)
    done = 0
    n_head = 64
    status = STATUS_OK
    while True:
        m = np.arange(done + 1, n_head, dtype=float)
        if m.size:
            yy = b[:, None] / (m[None, :] + a)
            head = head + (2.0 * (a / (m + a)) ** p * _gamma_g_np(p, yy)).sum(axis=1)
        done = n_head - 1
        x = n_head + a
        y = b / x
        tail = 2.0 * a_pow * x ** (1.0 - p) * _gamma_g_np(p - 1.0, y)
        tail = tail + a_pow * x ** (-p) * _gamma_g_np(p, y)
        xpow = x ** (-p - 1.0)
        ok = np.zeros(tau.shape, dtype=bool)
        last = np.zeros(tau.shape)
        for j in range(_N_BERN):
            k = 2.0 * j + 1.0
            corr = _EM_COEF[j] * 2.0 * a_pow * float(_gamma_np(np.float64(p + k))) * xpow * _one_minus_re_pow_np(p + k, y)
            corr = np.where(ok, 0.0, corr)
            tail = tail + corr
            last = np.where(ok, last, np.abs(corr))
            ok |= last <= 1e-2 * tol * np.abs(head + tail)
            if ok.all():
                break
            xpow /= x * x
        if ok.all():
            break
        if n_head * 4 > max_terms:
            status = STATUS_BUDGET
            break
        n_head *= 4
    out = head + tail
    err = last + 1e-15 * np.abs(out)
    zero = tau == 0.0
    return np.where(zero, 0.0, out), np.where(zero, 0.0, err), n_head, status


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


@njit
def integrand_nb(w, kind, tau, s, omega_c, temperature):
    x = w / omega_c
    v = math.exp((s - 2.0) * math.log(x) - x) / omega_c
    sn = math.sin(0.5 * w * tau)
    v *= 2.0 * sn * sn
    if temperature > 0.0:
        v /= math.tanh(0.5 * w / temperature)
    if kind == KIND_DOMEGAC:
        v *= (1.0 - s) / omega_c + w / (omega_c * omega_c)
    return v


def integrand_np(w, kind, tau, s, omega_c, temperature):
    x = w / omega_c
    v = np.exp((s - 2.0) * np.log(x) - x) / omega_c
    v = v * 2.0 * np.sin(0.5 * w * tau) ** 2
    if temperature > 0.0:
        v = v / np.tanh(0.5 * w / temperature)
    if kind == KIND_DOMEGAC:
        v = v * ((1.0 - s) / omega_c + w / (omega_c * omega_c))
    return v


@njit
def _gk15_nb(a, b, kind, tau, s, omega_c, temperature):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = integrand_nb(c, kind, tau, s, omega_c, temperature)
    rk = WGK[7] * fc
    rg = WG[3] * fc
    for j in range(7):
        dx = h * XGK[j]
        f2 = integrand_nb(c - dx, kind, tau, s, omega_c, temperature) + integrand_nb(
            c + dx, kind, tau, s, omega_c, temperature
        )
        rk += WGK[j] * f2
        if j % 2 == 1:
            rg += WG[j // 2] * f2
    return rk * h, rg * h


@njit
def adaptive_gk_nb(edges, kind, tau, s, omega_c, temperature, tol, max_panels):
    """Adaptive GK15 over consecutive panels ``edges[i] .. edges[i+1]``.

    A panel is accepted when ``|K15 - G7| <= max(tol |K15|, floor)``, with the
    floor set from a first sweep to ``1e-2 tol sum|K| / n_panels``; otherwise
    it is bisected, depth first, at most ``MAX_DEPTH`` times.
    Returns ``(integral, error, panels_evaluated, status)``.
    """
    n0 = edges.shape[0] - 1
    ks = np.empty(n0)
    gs = np.empty(n0)
    total_abs = 0.0
    for i in range(n0):
        k, g = _gk15_nb(edges[i], edges[i + 1], kind, tau, s, omega_c, temperature)
        ks[i] = k
        gs[i] = g
        total_abs += abs(k)
    floor = 1e-2 * tol * total_abs / max(n0, 1)
    result = 0.0
    error = 0.0
    panels = n0
    status = STATUS_OK
    sa = np.empty(MAX_DEPTH + 2)
    sb = np.empty(MAX_DEPTH + 2)
    sd = np.empty(MAX_DEPTH + 2, dtype=np.int64)
    for i in range(n0):
        e = abs(ks[i] - gs[i])
        if e <= max(tol * abs(ks[i]), floor):
            result += ks[i]
            error += e
            continue
        sa[0] = edges[i]
        sb[0] = edges[i + 1]
        sd[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            a = sa[sp]
            b = sb[sp]
            d = sd[sp] + 1
            m = 0.5 * (a + b)
            k1, g1 = _gk15_nb(a, m, kind, tau, s, omega_c, temperature)
            k2, g2 = _gk15_nb(m, b, kind, tau, s, omega_c, temperature)
            panels += 2
            e2 = abs(k2 - g2)
            if e2 <= max(tol * abs(k2), floor) or d >= MAX_DEPTH:
                if d >= MAX_DEPTH:
                    status = STATUS_DEPTH
                result += k2
                error += e2
            else:
                sa[sp] = m
                sb[sp] = b
                sd[sp] = d
                sp += 1
            e1 = abs(k1 - g1)
            if e1 <= max(tol * abs(k1), floor) or d >= MAX_DEPTH:
                if d >= MAX_DEPTH:
                    status = STATUS_DEPTH
                result += k1
                error += e1
            else:
                sa[sp] = a
                sb[sp] = m
                sd[sp] = d
                sp += 1
            if panels > max_panels:
                return result, error, panels, STATUS_BUDGET
    return result, error, panels, status


def _gk15_np(a, b, kind, tau, s, omega_c, temperature):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    f = integrand_np(c[:, None] + h[:, None] * _X15[None, :], kind, tau, s, omega_c, temperature)
    return (f @ _WK15) * h, (f @ _WG15) * h


def adaptive_gk_np(edges, kind, tau, s, omega_c, temperature, tol, max_panels, chunk=200_000):
    """Vectorised counterpart of :func:`adaptive_gk_nb` (breadth first)."""
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1]
    b = edges[1:]
    n0 = a.size
    depth = 0
    floor = None
    result = 0.0
    error = 0.0
    panels = 0
    status = STATUS_OK
    while a.size:
        next_a = []
        next_b = []
        for lo in range(0, a.size, chunk):
            ca = a[lo : lo + chunk]
            cb = b[lo : lo + chunk]
            k, g = _gk15_np(ca, cb, kind, tau, s, omega_c, temperature)
            panels += ca.size
            if floor is None:
                floor = 1e-2 * tol * np.abs(k).sum() / max(n0, 1)
            e = np.abs(k - g)
            ok = (e <= np.maximum(tol * np.abs(k), floor)) | (depth >= MAX_DEPTH)
            if depth >= MAX_DEPTH and not (e <= np.maximum(tol * np.abs(k), floor)).all():
                status = STATUS_DEPTH
            result += k[ok].sum()
            error += e[ok].sum()
            m = 0.5 * (ca[~ok] + cb[~ok])
            next_a += [ca[~ok], m]
            next_b += [m, cb[~ok]]
        a = np.concatenate(next_a) if next_a else np.empty(0)
        b = np.concatenate(next_b) if next_b else np.empty(0)
        depth += 1
        if panels + a.size > max_panels:
            return result, error, panels, STATUS_BUDGET
    return result, error, panels, status
