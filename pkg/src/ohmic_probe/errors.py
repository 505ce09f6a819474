"""Exception and warning types raised by the library."""


class OhmicProbeError(Exception):
    """Base class for all library errors."""


class DomainError(OhmicProbeError, ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(DomainError):
    """The function has a pole at the requested argument."""


class SingularParameterError(OhmicProbeError, ValueError):
    """The closed form is numerically singular at this ohmicity."""


class NonConvergenceError(OhmicProbeError, ArithmeticError):
    """An iterative or adaptive procedure failed to reach its tolerance."""


class StepCollapseError(OhmicProbeError, ArithmeticError):
    """Finite-difference stencil values are indistinguishable."""


class DegenerateWindowError(OhmicProbeError, ValueError):
    pass


class InsufficientPointsError(OhmicProbeError, ValueError):
    pass


class UnboundedVarianceError(OhmicProbeError, ZeroDivisionError):
    """Zero Fisher information: no finite variance bound exists."""


class BoundaryMaximumWarning(UserWarning):
    """The QSNR maximum sits on the edge of the search window."""
