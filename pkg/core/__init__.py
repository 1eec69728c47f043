"""
Core package initialization.

Exports:
- the error hierarchy shared by every library module
- Settings / get_settings (environment-backed defaults)
- registry (global verification-check registry)
"""

from .errors import (
    WormKernelError,
    DomainError,
    MembershipError,
    BranchCutError,
    SeparationError,
    DiagonalError,
    SeparationTooSmallError,
    ConvergenceError,
    QuadratureNonconvergenceError,
    NonFiniteIntegrandError,
    DecayDetectionError,
    NearSingularSetError,
    AnnulusMarginError,
    InconclusiveError,
)
from .registry import registry, CheckRegistry, CheckEntry, Suite, check_id_for
from .settings import Settings, get_settings

__all__ = [
    "WormKernelError",
    "DomainError",
    "MembershipError",
    "BranchCutError",
    "SeparationError",
    "DiagonalError",
    "SeparationTooSmallError",
    "ConvergenceError",
    "QuadratureNonconvergenceError",
    "NonFiniteIntegrandError",
    "DecayDetectionError",
    "NearSingularSetError",
    "AnnulusMarginError",
    "InconclusiveError",
    "registry",
    "CheckRegistry",
    "CheckEntry",
    "Suite",
    "check_id_for",
    "Settings",
    "get_settings",
]
