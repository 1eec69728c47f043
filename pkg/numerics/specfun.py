"""
Special functions for the spectral symbol.

Provides:
 - log_gamma: complex log-Gamma by the Lanczos approximation (g = 7, 9 terms),
   vectorised, with a single upward recurrence step for 0 < Re z < 1/2
 - log_alpha_hat / alpha_hat: the Laplace transform of the weight alpha_j,

       alpha_hat_j(-2i xi) = pi^2 Gamma(2 xi) / (2^(2 xi) |Gamma(xi + 1 + i eta)|^2),

   evaluated in log space, eta = (j + 1) / 2
 - alpha_hat_oracle: the same quantity as (pi/xi) * int_0^{pi/2} cos(s)^(2 xi) cosh((j+1) s) ds
 - beta_eta and the Stirling majorant used to bound it
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from pydantic import BaseModel, Field

from core.errors import DomainError
from .quadrature import integrate_adaptive, snap_tolerance


ArrayLike = Union[float, complex, np.ndarray]

_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI_SQUARED = 2.0 * math.log(math.pi)
_LOG_2 = math.log(2.0)


# ============================================================
# log Gamma
# ============================================================

def log_gamma(z: ArrayLike) -> ArrayLike:
    """
    Principal log Gamma(z) for Re z > 0.

    The imaginary part is continuous along rays from the positive real axis.
    """
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.real <= 0):
        raise DomainError("log_gamma requires Re z > 0")

    shift = arr.real < 0.5
    zz = np.where(shift, arr + 1.0, arr) - 1.0

    series = np.full(zz.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(1, _LANCZOS_COEF.size):
        series = series + _LANCZOS_COEF[k] / (zz + k)

    t = zz + _LANCZOS_G + 0.5
    result = _HALF_LOG_2PI + (zz + 0.5) * np.log(t) - t + np.log(series)
    result = np.where(shift, result - np.log(arr), result)

    return result if result.ndim else complex(result)


# ============================================================
# Spectral symbol
# ============================================================

class SpectralSymbol(BaseModel):
    """alpha_hat_j(-2i xi) stored as its natural logarithm."""

    j: int = Field(..., description="Fourier index")
    eta: float = Field(..., description="(j + 1) / 2")
    xi: float = Field(..., gt=0, description="Fourier frequency")
    log_value: float = Field(..., description="log alpha_hat_j(-2i xi)")

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def beta(self) -> float:
        """beta_eta(xi) = 1 / (2 pi alpha_hat_j(-2i xi))."""
        return math.exp(-math.log(2.0 * math.pi) - self.log_value)


def log_alpha_hat(j: int, xi: ArrayLike) -> ArrayLike:
    """
    Vectorised log alpha_hat_j(-2i xi).

    eta enters only through |j + 1|, so j and -2 - j produce bit-identical
    results.
    """
    x = np.asarray(xi, dtype=float)
    if np.any(x <= 0):
        raise DomainError("alpha_hat requires xi > 0")

    eta = abs(j + 1) / 2.0
    # log Gamma(2 xi) = log Gamma(2 xi + 1) - log(2 xi) keeps Re z >= 1 in Lanczos
    log_gamma_2xi = np.real(log_gamma(2.0 * x + 1.0)) - np.log(2.0 * x)
    log_pair = 2.0 * np.real(log_gamma(x + 1.0 + 1j * eta))
    result = _LOG_PI_SQUARED + log_gamma_2xi - 2.0 * x * _LOG_2 - log_pair

    return result if np.ndim(result) else float(result)


def alpha_hat(j: int, xi: float) -> SpectralSymbol:
    """alpha_hat_j(-2i xi) as a SpectralSymbol."""
    return SpectralSymbol(j=j, eta=(j + 1) / 2.0, xi=xi, log_value=log_alpha_hat(j, xi))


def alpha_hat_oracle(j: int, xi: float, tol: float = 1e-12) -> float:
    """alpha_hat_j(-2i xi) by adaptive quadrature of its finite-interval form."""
    if xi <= 0:
        raise DomainError("alpha_hat_oracle requires xi > 0")
    if tol <= 0:
        raise DomainError("tol must be positive")

    k = abs(j + 1)

    def integrand(s):
        return np.clip(np.cos(s), 0.0, None) ** (2.0 * xi) * np.cosh(k * s)

    res = integrate_adaptive(integrand, 0.0, 0.5 * math.pi, snap_tolerance(tol), tol_abs=0.0)
    return math.pi / xi * float(res.value)


def beta_eta(j: int, xi: ArrayLike) -> ArrayLike:
    """beta_eta(xi) = 1 / (2 pi alpha_hat_j(-2i xi)), the Fourier multiplier of K_j."""
    return np.exp(-math.log(2.0 * math.pi) - log_alpha_hat(j, xi))


def stirling_log_bound(xi: ArrayLike, eta: ArrayLike) -> ArrayLike:
    """
    Logarithm of xi^(3/2) exp{2(xi + 1/2) log(1 + (|eta| + 1/2)/(xi + 1/2)) - 2 eta arg(xi + 1 + i eta)},
    the Stirling majorant of beta_eta(xi) up to its constant.
    """
    x = np.asarray(xi, dtype=float)
    e = np.asarray(eta, dtype=float)
    return (1.5 * np.log(x)
            + 2.0 * (x + 0.5) * np.log1p((np.abs(e) + 0.5) / (x + 0.5))
            - 2.0 * e * np.arctan2(e, x + 1.0))
