"""Dephased qubit probe prepared in |+>.

After an interaction time ``tau`` the probe state is
``rho = (I + exp(-Gamma) sigma_1) / 2``, so the whole state is fixed by the
visibility ``exp(-Gamma)``. The eigenbasis ``{|+>, |->}`` does not depend on
``tau`` or on the bath parameters.
"""
from dataclasses import dataclass
import math

import numpy as np

from .decoherence import gamma
from .errors import DomainError

__all__ = ["ProbeState", "evolve", "measurement_probabilities", "PLUS", "MINUS", "SIGMA_1"]

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]])
PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class ProbeState:
    gamma: float

    def __post_init__(self):
        if not (self.gamma >= 0.0) or math.isnan(self.gamma):
            raise DomainError(f"decoherence function must be >= 0, got {self.gamma}")

    @classmethod
    def from_visibility(cls, visibility):
        if not 0.0 < visibility <= 1.0:
            raise DomainError("visibility must lie in (0, 1]")
        return cls(-math.log(visibility))

    @property
    def visibility(self):
        return math.exp(-self.gamma)

    @property
    def eigenvalues(self):
        """``((1 + v)/2, (1 - v)/2)`` for ``|+>`` and ``|->``; the second without cancellation."""
        return 0.5 * (1.0 + self.visibility), -0.5 * math.expm1(-self.gamma)

    @property
    def purity(self):
        v = self.visibility
        return 0.5 * (1.0 + v * v)

    def density_matrix(self):
        return 0.5 * (np.eye(2) + self.visibility * SIGMA_1)


def evolve(tau, bath, method="auto"):
    """Probe state after interaction time ``tau`` with the bath."""
    return ProbeState(gamma(tau, bath, method=method).value)


def measurement_probabilities(state):
    """Outcome probabilities ``(p_plus, p_minus)`` of a sigma_1 measurement."""
    return state.eigenvalues
