"""Self-check suites shared by the ``validate`` command and the test-suite."""
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .decoherence import BathSpec, gamma_closed_form, gamma_quadrature, gamma_series
from .estimation import fi_sigma1, qfi_closed, qfi_general

GRID_S = (0.5, 1.0, 3.0)
GRID_OMEGA_C = (1e-2, 1.0, 1e2)
GRID_T = (1e-2, 1.0, 1e2)
GRID_TAU = tuple(np.geomspace(1e-2, 1e2, 20))

AGREE_ABS = 1e-8
AGREE_REL = 1e-6
IDENTITY_REL = 1e-6


@dataclass
class SuiteReport:
    name: str
    n_checked: int = 0
    n_failed: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.n_checked > 0 and self.n_failed == 0


def grid_baths():
    for s, wc, t in itertools.product(GRID_S, GRID_OMEGA_C, GRID_T):
        yield BathSpec(s, wc, t)


def agree(x, y, abs_tol=AGREE_ABS, rel_tol=AGREE_REL):
    """``|x - y| <= max(abs_tol, rel_tol * max(|x|, |y|))``."""
    return abs(x - y) <= max(abs_tol, rel_tol * max(abs(x), abs(y)))


def triple_agreement():
    """Closed form, image series and quadrature agree pairwise on the grid."""
    rep = SuiteReport("triple_agreement")
    tau = np.array(GRID_TAU)
    for bath in grid_baths():
        c = np.asarray(gamma_closed_form(tau, bath))
        s = np.asarray(gamma_series(tau, bath))
        q = np.asarray(gamma_quadrature(tau, bath))
        for i, t in enumerate(tau):
            vals = (c[i], s[i], q[i])
            for x, y in itertools.combinations(vals, 2):
                rep.n_checked += 1
                scale = max(abs(x), abs(y))
                rep.worst = max(rep.worst, abs(x - y) / scale if scale else 0.0)
                if not agree(x, y):
                    rep.n_failed += 1
                    rep.failures.append((bath, float(t), vals))
    return rep


def optimality_identity():
    """``fi_sigma1``, ``qfi_general`` and ``qfi_closed`` coincide on the grid."""
    rep = SuiteReport("optimality_identity")
    for bath in grid_baths():
        for t in GRID_TAU:
            h = qfi_closed(t, bath)
            vals = (h, qfi_general(t, bath), fi_sigma1(t, bath))
            for x in vals[1:]:
                rep.n_checked += 1
                scale = max(abs(h), abs(x))
                err = abs(x - h) / scale if scale > 0 else 0.0
                rep.worst = max(rep.worst, err)
                # both vanish or underflow together when exp(2 Gamma) overflows
                if err > IDENTITY_REL or not math.isfinite(x):
                    rep.n_failed += 1
                    rep.failures.append((bath, float(t), vals))
    return rep


SUITES = {"triple_agreement": triple_agreement, "optimality_identity": optimality_identity}
