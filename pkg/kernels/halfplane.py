"""
Weighted Bergman kernels K_j of A^2(upper half-plane, alpha_j).

Three representations, all functions of lambda = -i(z - conj(w)):

- integral   : K_j = (1/2pi) int_0^inf exp(-lambda xi) / alpha_hat_j(-2i xi) dxi
- fourier    : K_j = int_R e^{-i(j+1)s} phi_lambda(s) ds,
               phi_lambda(s) = (1/2pi^3) sech^2 s [(2 log cosh s + lambda)^-2 + 4 (2 log cosh s + lambda)^-3]
- asymptotic : K_j ~ sum_{n=2}^{N-1} psi_n(j+1) / (z - conj(w))^n

plus the decay exponent b_lambda and the normalised kernel f_j = -lambda^2 K_j.
K_j depends on j only through |j + 1|; every evaluator keys on that.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import DiagonalError, DomainError, SeparationTooSmallError
from numerics.quadrature import integrate_adaptive, integrate_halfline
from numerics.specfun import log_alpha_hat
from numerics.weights import fiber_angle
from .base import (
    DISPATCH_RE_LAMBDA,
    LAMBDA_MIN,
    LAMBDA_MIN_INTEGRAL,
    KernelResult,
    Representation,
    Separation,
)
from .cache import psi_cache


logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
TINY_ABS = 1e-300
ASYMPTOTIC_SAFETY = 2.0
_PI3 = math.pi ** 3
_LOG_2PI = math.log(2.0 * math.pi)
_LOG_2 = math.log(2.0)
_NEG_I_POWERS = (1.0 + 0j, -1j, -1.0 + 0j, 1j)

LambdaLike = Union[Separation, complex, float]


# ============================================================
# Elementary pieces
# ============================================================

def _two_log_cosh(s: np.ndarray) -> np.ndarray:
    a = np.abs(s)
    return 2.0 * (a + np.log1p(np.exp(-2.0 * a)) - _LOG_2)


def _sech2(s: np.ndarray) -> np.ndarray:
    e = np.exp(-2.0 * np.abs(s))
    return 4.0 * e / (1.0 + e) ** 2


def b_lambda(lam: LambdaLike) -> float:
    """max{arccos(e^{-Re lambda / 2}), min{|Im lambda| / 2, pi/2}}."""
    sep = Separation.coerce(lam)
    return max(fiber_angle(sep.re / 2.0), min(abs(sep.im) / 2.0, math.pi / 2.0))


def phi_lambda(lam: LambdaLike, s):
    """phi_lambda(s); even in s, Schwartz for lambda off the closed negative axis."""
    sep = Separation.coerce(lam)
    s = np.asarray(s, dtype=float)
    d = _two_log_cosh(s) + sep.lam
    if np.any(d == 0):
        raise DomainError(f"phi_lambda has a pole at lambda={sep.lam}")
    value = _sech2(s) * (d ** -2 + 4.0 * d ** -3) / (2.0 * _PI3)
    return value if value.ndim else complex(value)


# ============================================================
# Laplace-integral representation
# ============================================================

def _kernel_integral(j: int, sep: Separation, tol: float, tol_abs: float = TINY_ABS) -> KernelResult:
    if sep.re < LAMBDA_MIN_INTEGRAL:
        raise SeparationTooSmallError(
            f"Re lambda = {sep.re:.3e} < {LAMBDA_MIN_INTEGRAL:g}; use the Fourier representation"
        )
    lam = sep.lam
    re = sep.re

    def log_magnitude(xi):
        return -re * xi - log_alpha_hat(j, xi) - _LOG_2PI

    def integrand(xi):
        return np.exp(-lam * xi - log_alpha_hat(j, xi) - _LOG_2PI)

    res = integrate_halfline(integrand, tol, tol_abs=tol_abs, log_magnitude=log_magnitude)
    return KernelResult(
        value=res.value,
        err_est=res.err_est,
        representation=Representation.INTEGRAL,
        diagnostics={"nodes": res.nodes_used, "cutoff": res.metadata.get("cutoff")},
    )


def kernel_j_integral(j: int, z, w, tol: float = DEFAULT_TOL) -> KernelResult:
    """K_j(z, w) from the Laplace integral; needs Re lambda >= 1e-3."""
    return _kernel_integral(j, Separation.from_points(z, w), tol)


# ============================================================
# Fourier representation
# ============================================================

def _fourier_cutoff(tol: float) -> float:
    # sech^2(S) <= 4 e^{-2S} < 1e-2 tol
    return max(4.0, 0.5 * math.log(4.0 / (1e-2 * tol)))


def fourier_batch(
    j: int,
    lambdas: Sequence[complex],
    tol: float = DEFAULT_TOL,
    *,
    tol_abs: float = TINY_ABS,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    phi_hat_lambda(j+1) for many separations with one shared adaptive rule.

    Returns (values, err_est per value, nodes used). The error criterion is
    relative to the largest value in the batch.
    """
    lams = np.atleast_1d(np.asarray(lambdas, dtype=complex))
    if np.any(lams.real < 0):
        raise DomainError("fourier_batch needs Re lambda >= 0")
    if np.any(np.abs(lams) < LAMBDA_MIN):
        raise DiagonalError(f"fourier_batch needs |lambda| >= {LAMBDA_MIN:g}")

    k = abs(j + 1)
    S = _fourier_cutoff(tol)
    sigma = math.sqrt(float(np.min(np.abs(lams))))
    points = [sigma * f for f in (1.0, 3.0, 10.0, 30.0, 100.0, 300.0) if sigma * f < min(S, 1.0)]

    def integrand(s):
        d = _two_log_cosh(s)[:, None] + lams[None, :]
        weight = 2.0 * np.cos(k * s) * _sech2(s) / (2.0 * _PI3)
        return weight[:, None] * (d ** -2 + 4.0 * d ** -3)

    res = integrate_adaptive(integrand, 0.0, S, tol, tol_abs=tol_abs, points=points)

    dmin = np.maximum(lams.real, np.abs(lams.imag))
    tail = (dmin ** -2 + 4.0 * dmin ** -3) * 2.0 * math.exp(-2.0 * S) / _PI3
    values = np.asarray(res.value, dtype=complex).reshape(lams.shape)
    errs = res.err_est + tail
    return values, errs, res.nodes_used


def _kernel_fourier(j: int, sep: Separation, tol: float, tol_abs: float = TINY_ABS) -> KernelResult:
    values, errs, nodes = fourier_batch(j, [sep.lam], tol, tol_abs=tol_abs)
    return KernelResult(
        value=values[0],
        err_est=float(errs[0]),
        representation=Representation.FOURIER,
        diagnostics={"nodes": nodes, "cutoff": _fourier_cutoff(tol)},
    )


def kernel_j_fourier(j: int, z, w, tol: float = DEFAULT_TOL) -> KernelResult:
    """K_j(z, w) = phi_hat_lambda(j+1); valid on the closed half-plane off the diagonal."""
    return _kernel_fourier(j, Separation.from_points(z, w), tol)


# ============================================================
# Asymptotic expansion
# ============================================================

def i_moment(m: int, xi: float, tol: float = 1e-12) -> float:
    """I_m(xi) = int_R e^{-i xi s} (2 log cosh s)^m sech^2 s ds (real, even in xi)."""
    if m < 0:
        return 0.0
    S = 20.0
    while (2.0 * S) ** m * 4.0 * math.exp(-2.0 * S) > 1e-3 * tol:
        S += 5.0

    def integrand(s):
        return 2.0 * np.cos(xi * s) * _two_log_cosh(s) ** m * _sech2(s)

    return float(integrate_adaptive(integrand, 0.0, S, tol, tol_abs=1e-3 * tol).value)


def psi_n(n: int, xi: float, tol: float = 1e-12) -> complex:
    """
    psi_n(xi) = (-i)^n (n-1)/(2 pi^3) [I_{n-2}(xi) - 2(n-2) I_{n-3}(xi)].

    n = 2 uses the closed form -(1/pi^3) (xi pi/2) / sinh(xi pi/2).
    """
    if n < 2:
        raise DomainError("psi_n is defined for n >= 2")
    xi = abs(float(xi))

    if n == 2:
        x = 0.5 * math.pi * xi
        if x == 0.0:
            return complex(-1.0 / _PI3)
        if x > 700.0:
            return complex(0.0)
        return complex(-(x / math.sinh(x)) / _PI3)

    def compute() -> complex:
        bracket = i_moment(n - 2, xi, tol) - 2.0 * (n - 2) * i_moment(n - 3, xi, tol)
        return _NEG_I_POWERS[n % 4] * (n - 1) / (2.0 * _PI3) * bracket

    return psi_cache.get_or_compute("psi", n, xi, tol, compute)


def _kernel_asymptotic(j: int, sep: Separation, order: int, kappa: float = ASYMPTOTIC_SAFETY) -> KernelResult:
    if not 3 <= order <= 8:
        raise DomainError(f"Expansion order N must lie in [3, 8], got {order}")
    d = sep.z_minus_wbar
    k = abs(j + 1)
    value = sum(psi_n(n, k) / d ** n for n in range(2, order))
    err = abs(psi_n(order, k)) * kappa / abs(d) ** order
    return KernelResult(
        value=value,
        err_est=err,
        representation=Representation.ASYMPTOTIC,
        diagnostics={"order": order, "kappa": kappa},
    )


def kernel_j_asymptotic(j: int, z, w, N: int = 4, kappa: float = ASYMPTOTIC_SAFETY) -> KernelResult:
    """Partial sum of the large-|z - conj(w)| expansion with N - 2 terms."""
    return _kernel_asymptotic(j, Separation.from_points(z, w), N, kappa)


# ============================================================
# Dispatch and normalised kernel
# ============================================================

def kernel_from_lambda(
    j: int,
    lam: LambdaLike,
    tol: float = DEFAULT_TOL,
    representation: Optional[Representation] = None,
    *,
    order: int = 4,
    tol_abs: float = TINY_ABS,
) -> KernelResult:
    """
    K_j as a function of lambda.

    Without an explicit representation: integral for Re lambda >= 0.2,
    Fourier otherwise. The asymptotic expansion is used only on request.
    """
    sep = Separation.coerce(lam)
    if representation is None:
        representation = (Representation.INTEGRAL if sep.re >= DISPATCH_RE_LAMBDA
                          else Representation.FOURIER)
    representation = Representation(representation)

    if representation == Representation.INTEGRAL:
        return _kernel_integral(j, sep, tol, tol_abs)
    if representation == Representation.FOURIER:
        return _kernel_fourier(j, sep, tol, tol_abs)
    if representation == Representation.ASYMPTOTIC:
        return _kernel_asymptotic(j, sep, order)
    raise DomainError(f"Representation '{representation.value}' is not a K_j evaluator")


def kernel_j(
    j: int,
    z,
    w,
    tol: float = DEFAULT_TOL,
    representation: Optional[Representation] = None,
    *,
    order: int = 4,
) -> KernelResult:
    """K_j(z, w) with automatic representation dispatch."""
    return kernel_from_lambda(j, Separation.from_points(z, w), tol, representation, order=order)


def f_j(j: int, lam: LambdaLike, tol: float = DEFAULT_TOL) -> complex:
    """f_j(lambda) = (z - conj(w))^2 K_j = -lambda^2 K_j."""
    sep = Separation.coerce(lam)
    return -sep.lam ** 2 * kernel_from_lambda(j, sep, tol).value
