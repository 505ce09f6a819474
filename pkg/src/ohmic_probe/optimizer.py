"""Maximisation of the QSNR over the interaction time and cutoff sweeps."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .decoherence import BathSpec
from .errors import BoundaryMaximumWarning, DomainError, InsufficientPointsError, OhmicProbeError
from .estimation import qsnr_values

__all__ = [
    "OptimizationResult",
    "ScalingFit",
    "search_domain",
    "maximize_qsnr",
    "scan_cutoff",
    "fit_scaling",
    "fit_power_law",
]

N_COARSE = 200
N_VERIFY = 1000
REL_WIDTH = 1e-6
VERIFY_RTOL = 1e-9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizationResult:
    """Optimal interaction time ``tau_opt`` and the QSNR ``q_opt`` reached there.

    ``bracket`` is the final golden-section interval in ``tau``;
    ``at_boundary`` flags a coarse maximum on an edge of the search domain,
    in which case ``converged`` is False.
    """

    tau_opt: float
    q_opt: float
    n_evals: int
    bracket: tuple
    converged: bool
    at_boundary: bool = False
    domain: tuple = (math.nan, math.nan)

    @property
    def rel_width(self):
        return (self.bracket[1] - self.bracket[0]) / self.tau_opt


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    prefactor: float
    r_squared: float
    window: tuple
    n_points: int = 0

    @property
    def conclusive(self):
        return self.r_squared >= 0.99


def search_domain(bath):
    """``[1e-3 / max(omega_c, T), 1e3 / min(omega_c, T)]``; ``T = 0`` is ignored."""
    scales = [bath.omega_c] + ([bath.temperature] if bath.temperature > 0 else [])
    return 1e-3 / max(scales), 1e3 / min(scales)


class _Objective:
    """Counts evaluations of ``Q(tau)``; works in ``x = log tau``."""

    def __init__(self, bath):
        self.bath = bath
        self.n = 0

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        self.n += x.size
        return qsnr_values(np.exp(x), self.bath)


def _golden(f, a, b, rel_width):
    """Golden-section search for a maximum of ``f`` on ``[a, b]`` (log tau)."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c)[0], f(d)[0]
    # bracket width in tau relative to tau is ~ (b - a) for small widths
    while math.expm1(b - a) > rel_width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)[0]
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)[0]
    x = c if fc >= fd else d
    return a, b, x, max(fc, fd)


def _refine(f, x, best, lo, hi):
    j = int(np.argmax(best))
    a = x[max(j - 1, 0)]
    b = x[min(j + 1, len(x) - 1)]
    a, b, xo, qo = _golden(f, a, b, REL_WIDTH)
    # keep the grid point if the refinement did not improve on it
    if best[j] > qo:
        xo, qo = x[j], best[j]
    return a, b, xo, qo, j


def maximize_qsnr(bath, n_coarse=N_COARSE, n_verify=N_VERIFY):
    """Global maximum of the QSNR over the interaction time.

    A log-spaced coarse scan over :func:`search_domain` locates the best
    grid point, golden-section search on ``log tau`` refines it, and a
    denser verification sweep checks that no other time does better. If the
    sweep finds a better time, the refinement is repeated around it.

    Warns
    -----
    BoundaryMaximumWarning
        If the coarse maximum sits on an edge of the search domain.
    """
    if not isinstance(bath, BathSpec):
        raise DomainError("bath must be a BathSpec")
    lo, hi = search_domain(bath)
    f = _Objective(bath)
    x = np.linspace(math.log(lo), math.log(hi), n_coarse)
    q = f(x)
    if not np.all(np.isfinite(q)):
        raise OhmicProbeError("non-finite QSNR on the coarse grid")
    j = int(np.argmax(q))
    at_boundary = j in (0, n_coarse - 1)
    if at_boundary:
        warnings.warn(
            f"QSNR maximum on the edge of the search domain for {bath}", BoundaryMaximumWarning, stacklevel=2
        )
    a, b, xo, qo, _ = _refine(f, x, q, lo, hi)

    xv = np.linspace(math.log(lo), math.log(hi), n_verify)
    qv = f(xv)
    k = int(np.argmax(qv))
    if qv[k] > qo * (1.0 + VERIFY_RTOL):
        a, b, xo, qo, _ = _refine(f, xv, qv, lo, hi)
    converged = (not at_boundary) and math.expm1(b - a) <= REL_WIDTH * (1 + 1e-9)
    return OptimizationResult(
        tau_opt=math.exp(xo),
        q_opt=float(qo),
        n_evals=f.n,
        bracket=(math.exp(a), math.exp(b)),
        converged=converged,
        at_boundary=at_boundary,
        domain=(lo, hi),
    )


@dataclass(frozen=True)
class ScanPoint:
    omega_c: float
    result: OptimizationResult = None
    error: Exception = field(default=None, compare=False)


def scan_cutoff(s, temperature, omega_c_grid, workers=None):
    """:func:`maximize_qsnr` at every cutoff of ``omega_c_grid``.

    Points run concurrently on ``workers`` threads; the output keeps grid
    order. An error at one point is stored in that point's ``error`` field
    and the scan carries on.
    """
    grid = [float(w) for w in omega_c_grid]
    if any(not (w > 0) for w in grid):
        raise DomainError("cutoff grid must be positive")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("cutoff grid must be sorted")

    def one(w):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", BoundaryMaximumWarning)
                try:
                    return ScanPoint(w, maximize_qsnr(BathSpec(s, w, temperature)))
                except BoundaryMaximumWarning:
                    pass
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", BoundaryMaximumWarning)
                res = maximize_qsnr(BathSpec(s, w, temperature))
            return ScanPoint(w, res, BoundaryMaximumWarning(f"boundary maximum at omega_c={w}"))
        except (OhmicProbeError, ArithmeticError, ValueError) as exc:
            return ScanPoint(w, None, exc)

    if workers is None or workers <= 1 or len(grid) <= 1:
        return [one(w) for w in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, grid))


def fit_power_law(x, y):
    """Least-squares fit of ``log y = log A + k log x``; returns ``(k, A, r2)``."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    k, c = np.polyfit(lx, ly, 1)
    resid = ly - (k * lx + c)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(k), math.exp(c), min(max(r2, 0.0), 1.0)


def fit_scaling(scan, window, min_points=10):
    """Power-law fit ``tau_opt = A omega_c^k`` over the cutoffs inside ``window``.

    ``scan`` holds ``(omega_c, OptimizationResult)`` pairs or
    :class:`ScanPoint` entries; failed points are skipped.
    """
    lo, hi = float(window[0]), float(window[1])
    w, t = [], []
    for item in scan:
        wc, res = (item.omega_c, item.result) if isinstance(item, ScanPoint) else item
        if res is not None and lo <= wc <= hi:
            w.append(wc)
            t.append(res.tau_opt)
    if len(w) < min_points:
        raise InsufficientPointsError(f"{len(w)} points in window, need {min_points}")
    if math.log10(max(w) / min(w)) < 1.0 - 1e-9:
        raise InsufficientPointsError("window points span less than one decade")
    k, a, r2 = fit_power_law(w, t)
    return ScalingFit(k, a, r2, (lo, hi), len(w))
