"""Qubit probes of Ohmic-class baths: decoherence and cutoff estimation."""
__version__ = "0.1.0"

from .decoherence import (
    BathSpec,
    GammaResult,
    Method,
    asymptotic_slope,
    dgamma_domegac,
    dgamma_domegac_quadrature,
    gamma,
    gamma_closed_form,
    gamma_quadrature,
    gamma_series,
    gamma_short_time_coeff,
    gamma_values,
    gamma_zero_temperature,
    spectral_density,
)
from .errors import (
    BoundaryMaximumWarning,
    DegenerateWindowError,
    DomainError,
    InsufficientPointsError,
    NonConvergenceError,
    OhmicProbeError,
    PoleError,
    SingularParameterError,
    StepCollapseError,
    UnboundedVarianceError,
)
from .estimation import EstimationMetrics, cr_bound, fi_sigma1, metrics, qfi_closed, qfi_general, qsnr
from .optimizer import OptimizationResult, ScalingFit, fit_scaling, maximize_qsnr, scan_cutoff
from .probe_model import ProbeState, evolve, measurement_probabilities
from .specfun import euler_gamma, hurwitz_zeta
