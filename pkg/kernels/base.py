"""
Shared kernel types.

Includes:
- Representation enum (integral / fourier / asymptotic)
- HalfPlanePoint and Separation with their validation
- KernelResult, the value + error + diagnostics record every evaluator returns
- module-wide thresholds
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Union

from core.errors import DiagonalError, DomainError, SeparationError


# Below this |lambda| every evaluator refuses to run (boundary diagonal).
LAMBDA_MIN = 1e-6
# The Laplace integral needs this much damping.
LAMBDA_MIN_INTEGRAL = 1e-3
# Automatic dispatch switches from Fourier to the Laplace integral here.
DISPATCH_RE_LAMBDA = 0.2
# Points are accepted this far outside a closed half-plane.
BOUNDARY_TOL = 1e-9


class Representation(str, Enum):
    """Which formula produced a kernel value."""
    INTEGRAL = "integral"
    FOURIER = "fourier"
    ASYMPTOTIC = "asymptotic"
    SERIES = "series"


# ============================================================
# Points and separations
# ============================================================

@dataclass(frozen=True)
class HalfPlanePoint:
    """A point of the closed upper half-plane."""
    zeta: complex

    def __post_init__(self):
        z = complex(self.zeta)
        if not (cmath.isfinite(z)):
            raise DomainError(f"Point {self.zeta!r} is not finite")
        if z.imag < -BOUNDARY_TOL:
            raise DomainError(f"Point {z} lies below the real axis")
        object.__setattr__(self, "zeta", z)

    @property
    def interior(self) -> bool:
        return self.zeta.imag > 0

    @staticmethod
    def coerce(p: Union["HalfPlanePoint", complex, float]) -> "HalfPlanePoint":
        return p if isinstance(p, HalfPlanePoint) else HalfPlanePoint(complex(p))


@dataclass(frozen=True)
class Separation:
    """
    lambda = -i (z - conj(w)).

    Re lambda = Im z + Im w >= 0, and |lambda| >= LAMBDA_MIN.
    """
    lam: complex

    def __post_init__(self):
        lam = complex(self.lam)
        if not cmath.isfinite(lam):
            raise SeparationError(f"Separation {self.lam!r} is not finite")
        if lam.real < -BOUNDARY_TOL:
            raise SeparationError(f"Re lambda = {lam.real:.3e} < 0 lies outside the geometry")
        if abs(lam) < LAMBDA_MIN:
            raise DiagonalError(f"|lambda| = {abs(lam):.3e} is below {LAMBDA_MIN:g} (boundary diagonal)")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_points(cls, z, w) -> "Separation":
        zp = HalfPlanePoint.coerce(z).zeta
        wp = HalfPlanePoint.coerce(w).zeta
        return cls(-1j * (zp - wp.conjugate()))

    @staticmethod
    def coerce(lam: Union["Separation", complex, float]) -> "Separation":
        return lam if isinstance(lam, Separation) else Separation(complex(lam))

    @property
    def re(self) -> float:
        return self.lam.real

    @property
    def im(self) -> float:
        return self.lam.imag

    @property
    def modulus(self) -> float:
        return abs(self.lam)

    @property
    def interior(self) -> bool:
        return self.lam.real > 0

    @property
    def z_minus_wbar(self) -> complex:
        """z - conj(w) = i lambda."""
        return 1j * self.lam


# ============================================================
# Results
# ============================================================

@dataclass
class KernelResult:
    """A kernel value with its error estimate and how it was computed."""
    value: complex
    err_est: float
    representation: Representation
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    series: Optional[Any] = None

    def __post_init__(self):
        self.value = complex(self.value)
        self.err_est = float(self.err_est)
        if self.err_est < 0:
            raise ValueError("err_est must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "value": self.value,
            "err_est": self.err_est,
            "representation": self.representation.value,
            "diagnostics": dict(self.diagnostics),
        }
        if self.series is not None:
            data["diagnostics"].update(self.series.to_dict())
        return data
