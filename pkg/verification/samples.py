"""
Test functions with known norms and values.

- RationalSample: f(zeta) = A (zeta + i a)^-b on the upper half-plane, with its
  Paley-Wiener profile g(xi) = 2 pi A (-i)^b xi^(b-1) e^(-a xi) / Gamma(b)
- WormSample: F(z) = E_eta(z) z2^j / (L(z) - c)^m on W
"""

from __future__ import annotations

import cmath
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator

from core.errors import DomainError
from geometry.worm import WormPoint, log_frame
from numerics.quadrature import integrate_halfline
from numerics.specfun import log_alpha_hat


_NEG_I_POWERS = (1.0 + 0j, -1j, -1.0 + 0j, 1j)


class RationalSample(BaseModel):
    """A (zeta + i a)^-b, a member of every A^2(U, alpha_j)."""
    kind: Literal["rational"] = "rational"
    a: float = Field(..., gt=0, description="Pole depth below the real axis")
    b: int = Field(..., ge=2, description="Pole order")
    amplitude: float = Field(1.0, description="Constant factor A")

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        value = self.amplitude * (zeta + 1j * self.a) ** (-self.b)
        return value if value.ndim else complex(value)

    def spectral_profile(self, xi):
        """g with f(zeta) = (1/2 pi) int_0^inf e^{i zeta xi} g(xi) dxi."""
        xi = np.asarray(xi, dtype=float)
        coef = 2.0 * math.pi * self.amplitude * _NEG_I_POWERS[self.b % 4] / math.gamma(self.b)
        value = coef * xi ** (self.b - 1) * np.exp(-self.a * xi)
        return value if value.ndim else complex(value)

    def paley_wiener_inverse(self, zeta: complex, tol: float = 1e-10) -> complex:
        """Recover f(zeta) from the profile by quadrature."""
        zeta = complex(zeta)
        if zeta.imag <= -self.a:
            raise DomainError("The inversion integral needs Im zeta > -a")

        def integrand(xi):
            return np.exp(1j * zeta * xi) * self.spectral_profile(xi) / (2.0 * math.pi)

        return complex(integrate_halfline(integrand, tol, tol_abs=1e-300).value)

    def weighted_norm(self, j: int, tol: float = 1e-10) -> float:
        """||f||^2 in A^2(U, alpha_j) = (1/2 pi) int_0^inf |g|^2 alpha_hat_j dxi."""
        if self.amplitude == 0:
            return 0.0
        log_coef = 2.0 * (math.log(2.0 * math.pi * abs(self.amplitude)) - math.lgamma(self.b)) - math.log(2.0 * math.pi)

        def log_magnitude(xi):
            return log_coef + 2.0 * (self.b - 1) * np.log(xi) - 2.0 * self.a * xi + log_alpha_hat(j, xi)

        def integrand(xi):
            return np.exp(log_magnitude(xi))

        return float(integrate_halfline(integrand, tol, tol_abs=1e-300, log_magnitude=log_magnitude).value)


class WormSample(BaseModel):
    """F_{eta,c,j,m}(z) = E_eta(z) z2^j / (L(z) - c)^m."""
    kind: Literal["worm"] = "worm"
    eta_re: float = Field(..., description="Re eta")
    eta_im: float = Field(0.0, description="Im eta")
    c: float = Field(..., description="Shift of the logarithmic frame, c > log 2")
    j: int = Field(..., description="Power of z2")
    m: float = Field(..., description="Power of (L - c)")

    @field_validator("c")
    @classmethod
    def validate_c(cls, v: float) -> float:
        if not v > math.log(2.0):
            raise ValueError(f"c must exceed log 2, got {v}")
        return v

    @property
    def eta(self) -> complex:
        return complex(self.eta_re, self.eta_im)

    def __call__(self, z) -> complex:
        z = WormPoint.coerce(z)
        L = log_frame(z)
        # Re(L - c) < 0 on W; this branch of (L - c)^m stays continuous there
        log_power = cmath.log(self.c - L) + 1j * math.pi
        return cmath.exp(self.eta * L - self.m * log_power) * z.z2 ** self.j
