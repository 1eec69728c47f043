"""
Worm domain geometry.

    W     = {z in C^2 : |z1 - e^{i log|z2|^2}| < 1, z2 != 0}
    W_mu  = {z in W : |log|z2|^2| < mu}                       (sharp truncation)
    U     = {w : v = Im w1 > 0, |u - log|w2|^2| < arccos(e^-v)}

Frames on W (principal logarithm, arg in (-pi, pi]):

    theta(z) = log|z2|^2
    L(z)     = log(z1 e^{-i theta}) + i theta
    ell(z)   = -i (L(z) - log 2)
    E_eta(z) = e^{eta L(z)}

Phi(z) = (ell(z), z2) maps W onto U with inverse (2 e^{i w1}, w2).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from core.errors import BranchCutError, DomainError, MembershipError


logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
BOUNDARY_TOL = 1e-9


class Domain(str, Enum):
    W = "W"
    WMU = "Wmu"
    U = "U"


# ============================================================
# Points
# ============================================================

def _theta(z2: complex) -> float:
    if z2 == 0:
        raise DomainError("log|z2|^2 is undefined at z2 = 0")
    return 2.0 * math.log(abs(z2))


@dataclass(frozen=True)
class WormPoint:
    """A point (z1, z2) of C^2 in the coordinates of W."""
    z1: complex
    z2: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        if not (cmath.isfinite(self.z1) and cmath.isfinite(self.z2)):
            raise DomainError(f"Point ({self.z1}, {self.z2}) is not finite")

    @property
    def theta(self) -> float:
        return _theta(self.z2)

    def as_tuple(self) -> Tuple[complex, complex]:
        return self.z1, self.z2

    @staticmethod
    def coerce(p) -> "WormPoint":
        return p if isinstance(p, WormPoint) else WormPoint(*p)


@dataclass(frozen=True)
class UPoint:
    """A point (w1, w2) in the coordinates of U; w1 = u + iv."""
    w1: complex
    w2: complex

    def __post_init__(self):
        object.__setattr__(self, "w1", complex(self.w1))
        object.__setattr__(self, "w2", complex(self.w2))
        if not (cmath.isfinite(self.w1) and cmath.isfinite(self.w2)):
            raise DomainError(f"Point ({self.w1}, {self.w2}) is not finite")

    @property
    def u(self) -> float:
        return self.w1.real

    @property
    def v(self) -> float:
        return self.w1.imag

    @property
    def theta(self) -> float:
        return _theta(self.w2)

    def as_tuple(self) -> Tuple[complex, complex]:
        return self.w1, self.w2

    @staticmethod
    def coerce(p) -> "UPoint":
        return p if isinstance(p, UPoint) else UPoint(*p)


Point = Union[WormPoint, UPoint]


# ============================================================
# Membership
# ============================================================

def _fiber_half_width(v: float) -> float:
    return math.acos(min(1.0, math.exp(-max(v, 0.0))))


def contains(domain: Union[Domain, str], p, *, mu: Optional[float] = None, tol: float = 0.0) -> bool:
    """
    Strict membership; tol > 0 admits the closure up to tol on every
    defining inequality. Points with z2 = 0 are never members.
    """
    domain = Domain(domain)
    if domain == Domain.U:
        w = UPoint.coerce(p)
        if w.w2 == 0:
            return False
        if w.v <= -tol:
            return False
        return abs(w.u - w.theta) < _fiber_half_width(w.v) + tol

    z = WormPoint.coerce(p)
    if z.z2 == 0:
        return False
    theta = z.theta
    inside = abs(z.z1 - cmath.exp(1j * theta)) < 1.0 + tol
    if domain == Domain.WMU:
        if mu is None or mu <= 0:
            raise DomainError("Wmu membership needs mu > 0")
        inside = inside and abs(theta) < mu + tol
    return inside


# ============================================================
# Frames
# ============================================================

@dataclass(frozen=True)
class Frame:
    """The holomorphic frame (L, ell) at a worm point; E(eta) = e^{eta L}."""
    L: complex
    ell: complex

    def E(self, eta: complex) -> complex:
        return cmath.exp(complex(eta) * self.L)


def log_frame(z) -> complex:
    """L(z) = log(z1 e^{-i theta}) + i theta with the principal branch."""
    z = WormPoint.coerce(z)
    theta = z.theta
    arg = z.z1 * cmath.exp(-1j * theta)
    if arg.real <= 0 and abs(arg.imag) <= 1e-300:
        raise BranchCutError(f"z1 e^(-i log|z2|^2) = {arg} lies on the cut (-inf, 0]")
    return cmath.log(arg) + 1j * theta


def frame(z) -> Frame:
    L = log_frame(z)
    return Frame(L=L, ell=-1j * (L - LOG2))


def ell_principal(z) -> complex:
    """-i log(z1 / 2); agrees with ell(z) on W_{pi/2}."""
    z = WormPoint.coerce(z)
    if z.z1.real <= 0 and abs(z.z1.imag) <= 1e-300:
        raise BranchCutError(f"z1 = {z.z1} lies on the cut (-inf, 0]")
    return -1j * cmath.log(z.z1 / 2.0)


# ============================================================
# Biholomorphism
# ============================================================

def map_phi(z) -> UPoint:
    z = WormPoint.coerce(z)
    if not contains(Domain.W, z):
        raise MembershipError(f"({z.z1}, {z.z2}) is not in W")
    return UPoint(frame(z).ell, z.z2)


def map_phi_inv(w) -> WormPoint:
    w = UPoint.coerce(w)
    if not contains(Domain.U, w):
        raise MembershipError(f"({w.w1}, {w.w2}) is not in U")
    return WormPoint(2.0 * cmath.exp(1j * w.w1), w.w2)


# ============================================================
# Singular set of the boundary kernel
# ============================================================

def _wrap(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def _arc_side(offset: float, half_width: float, tol: float) -> Optional[int]:
    """+1 / -1 when offset = +-half_width within tol, 0 for a degenerate arc, None otherwise."""
    if half_width <= tol and abs(offset) <= tol:
        return 0
    if abs(offset - half_width) <= tol:
        return 1
    if abs(offset + half_width) <= tol:
        return -1
    return None


def _same_side(a: Optional[int], b: Optional[int]) -> bool:
    if a is None or b is None:
        return False
    return a == 0 or b == 0 or a == b


def in_singular_set(domain: Union[Domain, str], z, w, tol: float = BOUNDARY_TOL) -> bool:
    """Whether the boundary pair (z, w) lies where the kernel does not extend."""
    domain = Domain(domain)

    if domain == Domain.U:
        z, w = UPoint.coerce(z), UPoint.coerce(w)
        if z.w2 == 0 or w.w2 == 0:
            return False
        if abs(z.v - w.v) > tol:
            return False
        v = 0.5 * (z.v + w.v)
        a = _fiber_half_width(v)
        side_z = _arc_side(z.u - z.theta, a, tol)
        side_w = _arc_side(w.u - w.theta, a, tol)
        if not _same_side(side_z, side_w):
            return False
        return abs(z.theta - w.theta) <= 2.0 * a + tol

    z, w = WormPoint.coerce(z), WormPoint.coerce(w)
    if abs(z.z1) <= tol or abs(w.z1) <= tol:
        return True
    if abs(z.z2) <= tol or abs(w.z2) <= tol:
        return True

    r = abs(z.z1)
    if abs(abs(w.z1) - r) > tol or r > 2.0 + tol:
        return False
    a = math.acos(min(1.0, r / 2.0))
    side_z = _arc_side(_wrap(cmath.phase(z.z1) - z.theta), a, tol)
    side_w = _arc_side(_wrap(cmath.phase(w.z1) - w.theta), a, tol)
    if not _same_side(side_z, side_w):
        return False
    return abs(z.theta - w.theta) <= 2.0 * a + tol


# ============================================================
# Samplers
# ============================================================

def sample_worm_points(
    rng: np.random.Generator,
    n: int,
    mu: float = 1.0,
    margin: float = 0.05,
) -> List[WormPoint]:
    """
    n interior points of W_mu: theta uniform in (-mu, mu), |z2| = e^{theta/2},
    z1 uniform in the fibre disk shrunk by margin.
    """
    theta = rng.uniform(-mu, mu, n)
    rho = (1.0 - margin) * np.sqrt(rng.uniform(0.0, 1.0, n))
    psi = rng.uniform(-math.pi, math.pi, n)
    phase = rng.uniform(-math.pi, math.pi, n)
    z1 = np.exp(1j * theta) * (1.0 + rho * np.exp(1j * psi))
    z2 = np.exp(theta / 2.0) * np.exp(1j * phase)
    return [WormPoint(a, b) for a, b in zip(z1, z2)]


def sample_u_points(
    rng: np.random.Generator,
    n: int,
    v_range: Tuple[float, float] = (0.3, 2.0),
    mu: float = 1.0,
    margin: float = 0.05,
) -> List[UPoint]:
    """n interior points of U with v in v_range and |log|w2|^2| < mu."""
    v = rng.uniform(v_range[0], v_range[1], n)
    theta = rng.uniform(-mu, mu, n)
    half = np.arccos(np.exp(-v)) * (1.0 - margin)
    u = theta + rng.uniform(-1.0, 1.0, n) * half
    phase = rng.uniform(-math.pi, math.pi, n)
    w2 = np.exp(theta / 2.0) * np.exp(1j * phase)
    return [UPoint(complex(a, b), c) for a, b, c in zip(u, v, w2)]
