"""
Weights of the reduction to one complex variable.

    alpha_j(v)     = (2 pi / (j+1)) sinh((j+1) arccos(e^-v)),   alpha_-1(v) = 2 pi arccos(e^-v)
    omega_j(u+iv)  = e^((j+1) u) alpha_j(v)

Both depend on j only through j + 1 up to sign, hence alpha_j = alpha_{-2-j}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from core.errors import DomainError


ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class WeightIndex:
    """Fourier index j with its reflection j <-> -2 - j."""
    j: int

    @property
    def k(self) -> int:
        return self.j + 1

    @property
    def mirror(self) -> "WeightIndex":
        return WeightIndex(-2 - self.j)

    @property
    def is_central(self) -> bool:
        return self.j == -1


def fiber_angle(v: ArrayLike) -> ArrayLike:
    """
    arccos(e^-v) for v >= 0, written as 2 arcsin(sqrt((1 - e^-v)/2)).

    The sine form uses expm1 so small v keeps full relative precision; the
    argument is clamped to [0, 1].
    """
    v = np.asarray(v, dtype=float)
    arg = np.clip(-np.expm1(-v) / 2.0, 0.0, 1.0)
    result = 2.0 * np.arcsin(np.sqrt(arg))
    return result if result.ndim else float(result)


def alpha(j: int, v: ArrayLike) -> ArrayLike:
    """alpha_j(v) for v > 0."""
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise DomainError("alpha requires v > 0")

    theta = fiber_angle(v)
    k = j + 1
    if k == 0:
        result = 2.0 * math.pi * np.asarray(theta)
    else:
        result = 2.0 * math.pi / k * np.sinh(k * np.asarray(theta))
    return result if np.ndim(result) else float(result)


def alpha_sup(j: int) -> float:
    """sup_v alpha_j(v), attained as v -> infinity."""
    k = j + 1
    if k == 0:
        return math.pi ** 2
    return 2.0 * math.pi / k * math.sinh(k * math.pi / 2.0)


def omega(j: int, w1: Union[complex, np.ndarray]) -> ArrayLike:
    """omega_j(w1) for Im w1 > 0."""
    w = np.asarray(w1, dtype=complex)
    if np.any(w.imag <= 0):
        raise DomainError("omega requires Im w1 > 0")

    k = j + 1
    base = np.asarray(alpha(j, w.imag))
    result = base if k == 0 else np.exp(k * w.real) * base
    return result if np.ndim(result) else float(result)
