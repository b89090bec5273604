"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class Weyl1DError(Exception):
    """Base class for all package errors."""


class InvalidParameter(Weyl1DError, ValueError):
    pass


class DomainMismatch(Weyl1DError, ValueError):
    pass


class OutOfDomain(Weyl1DError, ValueError):
    pass


class InteriorZeroDensity(Weyl1DError, ValueError):
    pass


class ConvexityViolation(Weyl1DError, ValueError):
    """Raised when a density fails the (K, N-1)-convexity check.

    The offending ``(y0, y1, t)`` triple is kept on ``witness``.
    """

    def __init__(self, message: str, witness=None, margin: float | None = None):
        super().__init__(message)
        self.witness = witness
        self.margin = margin


class EvaluationFailure(Weyl1DError, RuntimeError):
    pass


class QuadratureNonConvergence(Weyl1DError, RuntimeError):
    pass


class SingularMass(Weyl1DError, RuntimeError):
    pass


class SolverFailure(Weyl1DError, RuntimeError):
    pass


class BeyondResolvedRange(Weyl1DError, ValueError):
    pass


class UnresolvedTail(Weyl1DError, ValueError):
    pass


class HypothesisNotMet(Weyl1DError, ValueError):
    pass


class InsufficientSpectrum(Weyl1DError, ValueError):
    pass


class ConfigParse(Weyl1DError, ValueError):
    pass
