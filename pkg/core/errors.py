"""
Error hierarchy for worm-bergman.

Every failure raised by the numerical library derives from WormKernelError:
- DomainError and its subclasses: bad arguments, points outside a domain,
  branch-cut crossings, separations too close to the boundary diagonal
- ConvergenceError and its subclasses: quadrature budget exhaustion, missing
  decay, series that refuse to converge near the singular set, inconclusive
  norm classification

The CLI maps DomainError to exit code 2 and ConvergenceError to exit code 3.
"""

from typing import Any, Optional


class WormKernelError(Exception):
    """Base class for all library errors."""
    pass


# ============================================================
# Domain errors
# ============================================================

class DomainError(WormKernelError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class MembershipError(DomainError):
    """Raised when a point is not in the required domain."""
    pass


class BranchCutError(DomainError):
    """Raised when a principal logarithm would be evaluated on its cut."""
    pass


class SeparationError(DomainError):
    """Raised for invalid separations lambda = -i(z - conj(w))."""
    pass


class DiagonalError(SeparationError):
    """Raised when |lambda| falls below the diagonal threshold."""
    pass


class SeparationTooSmallError(SeparationError):
    """Raised when Re lambda is too small for the Laplace-integral representation."""
    pass


# ============================================================
# Convergence errors
# ============================================================

class ConvergenceError(WormKernelError, ArithmeticError):
    """Base class for numerical schemes that failed to meet their tolerance."""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class QuadratureNonconvergenceError(ConvergenceError):
    """Raised when adaptive quadrature exhausts its node budget."""
    pass


class NonFiniteIntegrandError(QuadratureNonconvergenceError):
    """Raised when an integrand returns NaN or inf at a quadrature node."""

    def __init__(self, message: str, interval: Optional[Any] = None):
        super().__init__(message)
        self.interval = interval


class DecayDetectionError(ConvergenceError):
    """Raised when a half-line integrand has not decayed by the end of the scan."""
    pass


class NearSingularSetError(ConvergenceError):
    """Raised when a kernel series does not settle within the term cap."""
    pass


class AnnulusMarginError(ConvergenceError):
    """Raised when the boundary profile is requested too close to the annulus edge."""
    pass


class InconclusiveError(ConvergenceError):
    """Raised when a norm probe shows neither a plateau nor clear growth."""
    pass
