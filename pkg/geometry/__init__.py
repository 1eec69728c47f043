"""
Geometry package.

Membership, frames and the biholomorphism W -> U.
"""

from .worm import (
    Domain,
    WormPoint,
    UPoint,
    Frame,
    contains,
    frame,
    log_frame,
    ell_principal,
    map_phi,
    map_phi_inv,
    in_singular_set,
    sample_worm_points,
    sample_u_points,
)

__all__ = [
    "Domain",
    "WormPoint",
    "UPoint",
    "Frame",
    "contains",
    "frame",
    "log_frame",
    "ell_principal",
    "map_phi",
    "map_phi_inv",
    "in_singular_set",
    "sample_worm_points",
    "sample_u_points",
]
