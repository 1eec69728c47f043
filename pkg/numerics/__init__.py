"""
Numerics package.

Exports the one-variable building blocks:
- quadrature (adaptive Gauss-Kronrod, half-line maps, 2-D regions)
- specfun (log Gamma, spectral symbol and its quadrature oracle)
- weights (alpha_j, omega_j)
"""

from .quadrature import (
    QuadratureResult,
    Region,
    integrate_adaptive,
    integrate_halfline,
    integrate_2d,
    snap_tolerance,
    TOLERANCE_LADDER,
)
from .specfun import (
    SpectralSymbol,
    log_gamma,
    log_alpha_hat,
    alpha_hat,
    alpha_hat_oracle,
    beta_eta,
    stirling_log_bound,
)
from .weights import WeightIndex, alpha, alpha_sup, omega, fiber_angle

__all__ = [
    "QuadratureResult",
    "Region",
    "integrate_adaptive",
    "integrate_halfline",
    "integrate_2d",
    "snap_tolerance",
    "TOLERANCE_LADDER",
    "SpectralSymbol",
    "log_gamma",
    "log_alpha_hat",
    "alpha_hat",
    "alpha_hat_oracle",
    "beta_eta",
    "stirling_log_bound",
    "WeightIndex",
    "alpha",
    "alpha_sup",
    "omega",
    "fiber_angle",
]
