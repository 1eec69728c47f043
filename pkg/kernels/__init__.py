"""
Kernels package.

- halfplane: the weighted half-plane kernels K_j and their expansion
- worm: the j-series kernels of U and W, the boundary profile g
- cache: memo for the expansion coefficients
"""

from .base import (
    HalfPlanePoint,
    KernelResult,
    Representation,
    Separation,
    LAMBDA_MIN,
    LAMBDA_MIN_INTEGRAL,
    DISPATCH_RE_LAMBDA,
)
from .cache import ExpansionCache, psi_cache
from .halfplane import (
    b_lambda,
    phi_lambda,
    kernel_j_integral,
    kernel_j_fourier,
    kernel_j_asymptotic,
    kernel_j,
    kernel_from_lambda,
    fourier_batch,
    i_moment,
    psi_n,
    f_j,
)
from .worm import (
    SeriesDiagnostics,
    TruncationPolicy,
    kernel_U,
    kernel_W,
    normalized_kernel,
    g_coefficient,
    g_boundary,
    g_probe_circle,
)

__all__ = [
    "HalfPlanePoint",
    "KernelResult",
    "Representation",
    "Separation",
    "LAMBDA_MIN",
    "LAMBDA_MIN_INTEGRAL",
    "DISPATCH_RE_LAMBDA",
    "ExpansionCache",
    "psi_cache",
    "b_lambda",
    "phi_lambda",
    "kernel_j_integral",
    "kernel_j_fourier",
    "kernel_j_asymptotic",
    "kernel_j",
    "kernel_from_lambda",
    "fourier_batch",
    "i_moment",
    "psi_n",
    "f_j",
    "SeriesDiagnostics",
    "TruncationPolicy",
    "kernel_U",
    "kernel_W",
    "normalized_kernel",
    "g_coefficient",
    "g_boundary",
    "g_probe_circle",
]
