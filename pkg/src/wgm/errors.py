"""Exception types shared across the package."""

from __future__ import annotations


class WgmError(Exception):
    """Base class for all package errors."""


class DomainError(WgmError, ValueError):
    """Argument outside the documented working region."""


class ConvergenceError(WgmError, RuntimeError):
    """An iterative procedure or series did not meet its tolerance."""


class UnknownProfile(WgmError, KeyError):
    """Catalog lookup for an unregistered profile name."""


class SingularSystem(WgmError, RuntimeError):
    """A collocation matrix is numerically singular."""


class NoConvergence(ConvergenceError):
    """Adaptive refinement exhausted its degree budget."""


class ScalingDegenerate(WgmError, RuntimeError):
    """Boundary scaling data vanish at this k."""


class NearHankelZero(WgmError, RuntimeError):
    """The DtN multiplier is evaluated at (or near) a Hankel zero."""


class DerivativeVanished(WgmError, RuntimeError):
    """Newton step undefined because the derivative vanished."""


class SingularT(WgmError, RuntimeError):
    """The 2x2 modal matrix is numerically singular."""


class RegimeUnsupported(WgmError, ValueError):
    """Asymptotic formula requested outside its hypotheses."""


class NoCriticalPoint(WgmError, ValueError):
    """No inner critical point of r n(r) on (0, xi)."""


class HessianNotPositive(WgmError, ValueError):
    """Adimensional Hessian at the inner critical point is not positive."""


class NearSingular(WgmError, RuntimeError):
    """Real-axis scattering problem numerically singular."""


class NormalizationDegenerate(WgmError, RuntimeError):
    """Requested trace normalisation is too small to divide by."""


class ProviderError(WgmError, RuntimeError):
    """Determinant evaluation failed inside a Newton run."""

    def __init__(self, iteration: int, k: complex, cause: Exception):
        super().__init__(f"evaluation failed at iterate {iteration} (k={k}): {cause}")
        self.iteration = iteration
        self.k = k
        self.cause = cause
