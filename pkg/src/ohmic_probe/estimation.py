"""Local estimation of the cutoff frequency from the dephased probe.

Three separately coded routes give the same Fisher information:

* :func:`qfi_closed` -- ``(dGamma)^2 / (exp(2 Gamma) - 1)``;
* :func:`qfi_general` -- the eigen-decomposition formula for the QFI applied
  to the 2x2 density matrix, eigenvector term included;
* :func:`fi_sigma1` -- the classical Fisher information of the two-outcome
  sigma_1 measurement.

All derivatives are with respect to ``omega_c``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .decoherence import dgamma_domegac, dgamma_domegac_values, gamma, gamma_values
from .errors import DomainError, UnboundedVarianceError
from .probe_model import PLUS, SIGMA_1, ProbeState, measurement_probabilities

__all__ = [
    "EstimationMetrics",
    "qfi_from_gamma",
    "qfi_closed",
    "qfi_general",
    "fi_sigma1",
    "fi_two_outcome",
    "qsnr",
    "qsnr_values",
    "cr_bound",
    "metrics",
]

#: Below this Gamma, exp(2 Gamma) - 1 is replaced by its expansion.
SMALL_GAMMA = 1e-8


@dataclass(frozen=True)
class EstimationMetrics:
    """Estimation figures of merit at one ``(tau, bath)``.

    ``qsnr`` bounds the signal-to-noise ratio ``omega_c^2 / Var`` of any
    unbiased estimator built from single-shot data; ``cr_variance_bound`` is
    the quantum Cramer-Rao bound for ``n_measurements`` repetitions.
    """

    tau: float
    qfi: float
    fi_optimal: float
    qsnr: float
    cr_variance_bound: float
    n_measurements: int = 1


def qfi_from_gamma(g, dg):
    """``dg^2 / (exp(2 g) - 1)``, elementwise; 0 where ``g == 0``."""
    g = np.asarray(g, dtype=float)
    dg = np.asarray(dg, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        small = dg * dg / (2.0 * g * (1.0 + g))
        # assembled in logs so the result keeps full precision down to subnormals
        large = np.exp(2.0 * np.log(np.abs(dg)) - 2.0 * g - np.log(-np.expm1(-2.0 * g)))
        h = np.where(g < SMALL_GAMMA, small, large)
    h = np.where(g > 0, h, 0.0)
    return float(h) if h.ndim == 0 else h


def _check_tau(tau):
    if not (tau >= 0) or not math.isfinite(tau):
        raise DomainError("tau must be finite and >= 0")


def qfi_closed(tau, bath):
    """Quantum Fisher information for ``omega_c``."""
    _check_tau(tau)
    if tau == 0:
        return 0.0
    return qfi_from_gamma(gamma(tau, bath).value, dgamma_domegac(tau, bath))


def _qfi_eigen(evals, evecs, drho):
    """QFI from ``sum (d rho_n)^2 / rho_n + 2 sum_{n != m} (rho_n - rho_m)^2/(rho_n + rho_m) |<m|d n>|^2``."""
    h = 0.0
    for n in range(2):
        phi_n = evecs[:, n]
        d_rho_n = phi_n @ drho @ phi_n
        if evals[n] > 0:
            h += d_rho_n**2 / evals[n]
        for m in range(2):
            if m == n or evals[n] == evals[m]:
                continue
            phi_m = evecs[:, m]
            # first-order perturbation theory: <m| d n> = <m| d rho |n> / (rho_n - rho_m)
            overlap = (phi_m @ drho @ phi_n) / (evals[n] - evals[m])
            h += 2.0 * (evals[n] - evals[m]) ** 2 / (evals[n] + evals[m]) * overlap**2
    return h


def qfi_general(tau, bath):
    """QFI evaluated from the spectral decomposition of the probe state.

    Eigenvectors come from ``eigh``; the eigenvalues ``(1 +- v)/2`` are taken
    from :class:`ProbeState`, where the smaller one is ``-expm1(-Gamma)/2``
    and keeps full relative precision when ``Gamma`` is tiny.
    """
    _check_tau(tau)
    if tau == 0:
        return 0.0
    state = ProbeState(gamma(tau, bath).value)
    dv = -state.visibility * dgamma_domegac(tau, bath)
    drho = 0.5 * dv * SIGMA_1
    # rho - I/2 carries the eigenvectors of rho without the large identity
    # part, so eigh resolves them even when v is below machine epsilon
    traceless = state.density_matrix() - 0.5 * np.eye(2)
    norm = np.abs(traceless).max()
    _, evecs = np.linalg.eigh(traceless / norm if norm > 0 else SIGMA_1)
    hi, lo = state.eigenvalues
    evals = np.array([hi if abs(evecs[:, n] @ PLUS) > 0.5 else lo for n in range(2)])
    return float(_qfi_eigen(evals, evecs, drho))


def fi_two_outcome(p_plus, dp_plus):
    """Fisher information ``dp^2 / (p (1 - p))`` of a two-outcome measurement."""
    p_minus = 1.0 - p_plus
    if not 0.0 <= p_plus <= 1.0:
        raise DomainError("probability must lie in [0, 1]")
    if p_plus * p_minus == 0.0:
        return 0.0
    return dp_plus**2 / (p_plus * p_minus)


def fi_sigma1(tau, bath):
    """Fisher information of the projective sigma_1 measurement."""
    _check_tau(tau)
    if tau == 0:
        return 0.0
    state = ProbeState(gamma(tau, bath).value)
    p_plus, p_minus = measurement_probabilities(state)
    dp_plus = -0.5 * state.visibility * dgamma_domegac(tau, bath)
    # both outcomes: dp^2/p_+ + dp^2/p_- = dp^2 / (p_+ p_-)
    if p_minus == 0.0:
        return 0.0
    return dp_plus**2 / (p_plus * p_minus)


def qsnr(tau, bath):
    """Quantum signal-to-noise ratio ``omega_c^2 * QFI``."""
    return bath.omega_c**2 * qfi_closed(tau, bath)


def qsnr_values(tau, bath):
    """Vectorised :func:`qsnr` over an array of interaction times."""
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    g = gamma_values(t, bath)
    dg = dgamma_domegac_values(t, bath)[0]
    return bath.omega_c**2 * np.asarray(qfi_from_gamma(g, dg))


def cr_bound(qfi, m=1):
    """Quantum Cramer-Rao bound ``1 / (M * QFI)`` on the estimator variance."""
    if int(m) != m or m < 1:
        raise DomainError("number of measurements must be an integer >= 1")
    if qfi < 0 or math.isnan(qfi):
        raise DomainError("Fisher information must be >= 0")
    if qfi == 0:
        raise UnboundedVarianceError("zero Fisher information: variance is unbounded")
    return 1.0 / (m * qfi)


def metrics(tau, bath, m=1):
    """All estimation figures of merit at one interaction time."""
    h = qfi_closed(tau, bath)
    return EstimationMetrics(
        tau=float(tau),
        qfi=h,
        fi_optimal=fi_sigma1(tau, bath),
        qsnr=bath.omega_c**2 * h,
        cr_variance_bound=cr_bound(h, m) if h > 0 else math.inf,
        n_measurements=int(m),
    )
