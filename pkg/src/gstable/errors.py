"""Typed errors raised by the numerical routines.

Every routine in this package either returns a finite float or raises one
of these exceptions; NaN is never propagated to callers.
"""


class GStableError(Exception):
    """Base class for all package errors."""


class ParameterError(GStableError, ValueError):
    """A parameter violates a documented invariant (domain error)."""


class DecayError(GStableError):
    """Contour integrand failed the numerical decay test at the truncation point."""


class PoleOnContour(GStableError):
    """A gamma-factor argument passes within 1e-8 of a nonpositive integer on the contour."""


class NonConvergence(GStableError):
    """A series or iterative scheme did not converge within its term budget."""


class KernelSingularity(GStableError):
    """Convolution kernel is not integrable at the origin."""


class TailDivergence(GStableError):
    """A Laplace-transform time integral failed to converge numerically."""


class EvalFailure(GStableError):
    """All available evaluation methods failed for the requested point."""


class OverflowDomain(GStableError):
    """Requested value exceeds double-precision range (documented overflow guard)."""
