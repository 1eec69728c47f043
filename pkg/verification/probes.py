"""
Numerical probes of the function-space statements.

- reproducing_error: <f, K_j(., w)>_{alpha_j} against f(w) on a truncated box
- sample_norm: finite / divergent classification of ||F_{eta,c,j,m}||^2 on W_mu
- divergence_probe: the one-variable integrals that bound ||K(., w)||_{L^p},
  ||K(., w)||_{W^s} from below, over a ladder of inner cutoffs
- decay_estimate: least-squares rate of log|K_j| in |j + 1|
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    DomainError,
    InconclusiveError,
    NonFiniteIntegrandError,
    QuadratureNonconvergenceError,
)
from geometry.worm import WormPoint, log_frame
from kernels.base import HalfPlanePoint, Separation
from kernels.halfplane import b_lambda, f_j, fourier_batch, kernel_from_lambda, psi_n
from numerics.quadrature import Region, integrate_2d, integrate_adaptive
from numerics.weights import alpha, alpha_sup
from .samples import RationalSample


logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
DEFAULT_LP_LADDER = tuple(10.0 ** -k for k in range(2, 9))
DEFAULT_SOBOLEV_LADDER = tuple(10.0 ** -k for k in range(2, 61, 2))
MAX_LEVEL = 48
NORM_BUDGET = 2_000_000
UNDERFLOW_GUARD = 1e-280


# ============================================================
# Results
# ============================================================

@dataclass
class ReproducingResult:
    error: float
    value: complex
    target: complex
    box: Tuple[float, float, float, float]
    nodes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.error,
            "value": self.value,
            "target": self.target,
            "box": list(self.box),
            "nodes": self.nodes,
        }


@dataclass
class NormResult:
    """Outcome of a norm classification; value is set only when finite."""
    classification: str
    partials: List[float]
    increments: List[float]
    value: Optional[float] = None
    err_est: Optional[float] = None
    reason: str = ""

    @property
    def finite(self) -> bool:
        return self.classification == "finite"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classification": self.classification,
            "value": self.value,
            "err_est": self.err_est,
            "partials": list(self.partials),
            "increments": list(self.increments),
            "reason": self.reason,
        }


class ProbeKind(str, Enum):
    LP = "lp"
    L2 = "l2"
    SOBOLEV = "sobolev"


@dataclass
class ProbeResult:
    kind: ProbeKind
    parameter: float
    deltas: List[float]
    partials: List[float]
    increments: List[float]
    growth_exponents: List[float] = field(default_factory=list)

    @property
    def growth(self) -> float:
        """last / first partial."""
        return self.partials[-1] / self.partials[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "parameter": self.parameter,
            "deltas": list(self.deltas),
            "partials": list(self.partials),
            "increments": list(self.increments),
            "growth_exponents": list(self.growth_exponents),
        }


@dataclass
class DecayFit:
    lam: complex
    b_lambda: float
    rate_plus: float
    rate_minus: float
    ks: List[int]
    log_abs_plus: List[float]
    log_abs_minus: List[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lam,
            "b_lambda": self.b_lambda,
            "rate_plus": self.rate_plus,
            "rate_minus": self.rate_minus,
            "ks": list(self.ks),
            "log_abs_plus": list(self.log_abs_plus),
            "log_abs_minus": list(self.log_abs_minus),
        }


# ============================================================
# Reproducing property
# ============================================================

def _box_radius(j: int, f: RationalSample, w: complex, target: complex) -> float:
    # |f| |K_j| alpha_j <= A sup(alpha) C_K |zeta|^(-b-2) outside the box
    c_k = 2.0 * max(abs(f_j(j, 2.0 * w.imag)), abs(psi_n(2, j + 1)))
    tail = 1e-4 * abs(target)
    r = (alpha_sup(j) * abs(f.amplitude) * c_k * math.pi / (f.b * tail)) ** (1.0 / f.b)
    return r + abs(w.real) + w.imag


def reproducing_error(
    j: int,
    f: RationalSample,
    w,
    *,
    budget: int = 4_000_000,
    tol: float = 1e-6,
    radius: Optional[float] = None,
    kernel_tol: float = 1e-9,
) -> ReproducingResult:
    """|int f conj(K_j(., w)) alpha_j dA - f(w)| / |f(w)| over a truncated box."""
    w = HalfPlanePoint.coerce(w).zeta
    if w.imag <= 0:
        raise DomainError("reproducing_error needs an interior point w")

    target = complex(f(w))
    if f.amplitude == 0:
        return ReproducingResult(error=0.0, value=0j, target=target, box=(w.real, w.real, 0.0, 0.0))

    R = radius if radius is not None else _box_radius(j, f, w, target)
    w_bar = w.conjugate()

    def integrand(u, v):
        zeta = u + 1j * v
        values, _, _ = fourier_batch(j, -1j * (zeta - w_bar), kernel_tol)
        return f(zeta) * np.conj(values) * alpha(j, v)

    region = Region.box(w.real - R, w.real + R, 0.0, R,
                        x_points=_dyadic(w.real - R, w.real + R, w.real),
                        y_points=_dyadic(0.0, R, w.imag))
    logger.info(f"[REPRODUCE] j={j} w={w} box radius={R:.4g}")
    res = integrate_2d(integrand, region, budget=budget, tol=tol, tol_abs=1e-7 * abs(target))
    value = complex(res.value)
    return ReproducingResult(
        error=abs(value - target) / abs(target),
        value=value,
        target=target,
        box=(w.real - R, w.real + R, 0.0, R),
        nodes=res.nodes_used,
    )


# ============================================================
# Norm classification
# ============================================================

def _norm_integrand(a: float, c: float, m: float, kappa: float, k: int, mu: float):
    """
    pi e^{2(a+1)s} [(s-c)^2 + t^2]^-m e^{kappa t} W(s, t) with
    W = int e^{-k psi} dpsi over |psi| < arccos(e^s/2), |t - psi| < mu.
    """
    def f(s, t):
        half = np.arccos(np.clip(np.exp(s) / 2.0, 0.0, 1.0))
        if math.isinf(mu):
            lo, hi = -half, half
        else:
            lo = np.maximum(-half, t - mu)
            hi = np.minimum(half, t + mu)
        width = np.maximum(hi - lo, 0.0)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            if k == 0:
                weight = width
            else:
                lo_safe = np.where(width > 0, lo, 0.0)
                weight = np.where(width > 0, np.exp(-k * lo_safe) * -np.expm1(-k * width) / k, 0.0)
            log_part = 2.0 * (a + 1.0) * s + kappa * t - m * np.log((s - c) ** 2 + t ** 2)
            return np.where(weight > 0, math.pi * np.exp(log_part) * weight, 0.0)
    return f


def _dyadic(lo: float, hi: float, center: float = 0.0) -> List[float]:
    """center and center +- 2^i strictly inside (lo, hi)."""
    out = [center] if lo < center < hi else []
    step = 1.0
    while center - step > lo or center + step < hi:
        out.extend(x for x in (center - step, center + step) if lo < x < hi)
        step *= 2.0
    return sorted(out)


def _norm_regions(level: int, mu: float) -> List[Region]:
    if level == 0:
        t_span = (-1.0, 1.0) if math.isinf(mu) else (-0.5 * math.pi - mu, 0.5 * math.pi + mu)
        return [Region.box(-1.0, LOG2, *t_span)]
    s_hi = 2.0 ** (level - 1)
    s_lo = 2.0 ** level
    if not math.isinf(mu):
        return [Region.box(-s_lo, -s_hi, -0.5 * math.pi - mu, 0.5 * math.pi + mu)]
    return [
        Region.box(-s_lo, -s_hi, -s_lo, s_lo, y_points=_dyadic(-s_lo, s_lo)),
        Region.box(-s_hi, LOG2, s_hi, s_lo, x_points=_dyadic(-s_hi, LOG2)),
        Region.box(-s_hi, LOG2, -s_lo, -s_hi, x_points=_dyadic(-s_hi, LOG2)),
    ]


def _growth_confirmed(increments: List[float]) -> bool:
    """Three or more completed levels past the first, each increment larger than the last."""
    tail = increments[1:]
    if len(tail) < 3 or not all(x > 0 and math.isfinite(x) for x in tail):
        return False
    return all(cur > prev for prev, cur in zip(tail[-3:-1], tail[-2:]))


def _non_finite(level: int, partials: List[float], increments: List[float], where: str) -> NormResult:
    if _growth_confirmed(increments):
        logger.info(f"[NORM] integrand overflows at level {level} after growing increments")
        return NormResult("divergent", partials, increments, reason=f"overflow at level {level} ({where})")
    raise InconclusiveError(
        f"Integrand is not finite at level {level} ({where}) without prior growth",
        partial=partials,
    )


def _increment_ratios(increments: List[float]) -> List[float]:
    ratios = []
    for prev, cur in zip(increments[:-1], increments[1:]):
        if cur <= 1e-300 or prev <= 0:
            ratios.append(0.0 if cur <= 1e-300 else math.inf)
        else:
            ratios.append(cur / prev)
    return ratios


def sample_norm(
    eta: complex,
    c: float,
    j: int,
    m: float,
    mu: Optional[float] = 1.0,
    tol: float = 1e-8,
    *,
    max_level: int = MAX_LEVEL,
    budget: int = NORM_BUDGET,
) -> NormResult:
    """
    Classify ||F_{eta,c,j,m}||^2 on W_mu (mu = None or inf for all of W).

    Partials accumulate over the cutoffs s > -2^k (and |t| < 2^k when mu is
    infinite). Finite: increment ratios <= 0.9 and the partials settle to
    1e-3; the value adds the geometric tail. Divergent: monotone partials
    with last/first > 10 and increment ratios >= 0.95, or an integrand that
    overflows after at least three growing increments. A non-finite
    integrand without that growth, or no verdict within max_level, raises
    InconclusiveError.
    """
    eta = complex(eta)
    if not c > LOG2:
        raise DomainError(f"c must exceed log 2, got {c}")
    mu = math.inf if mu is None else float(mu)
    if not mu > 0:
        raise DomainError("mu must be positive")

    a, b = eta.real, eta.imag
    k = j + 1
    f = _norm_integrand(a, c, m, k - 2.0 * b, k, mu)

    partials: List[float] = []
    increments: List[float] = []
    errs = 0.0
    for level in range(max_level + 1):
        inc = 0.0
        try:
            for region in _norm_regions(level, mu):
                tol_abs = 1e-12 * partials[-1] if partials else 1e-300
                res = integrate_2d(f, region, budget=budget, tol=tol, tol_abs=tol_abs)
                inc += float(np.real(res.value))
                errs += res.err_est
        except NonFiniteIntegrandError as e:
            return _non_finite(level, partials, increments, str(e))
        except QuadratureNonconvergenceError as e:
            raise InconclusiveError(f"Quadrature failed at level {level}: {e}", partial=partials) from e
        if not math.isfinite(inc):
            return _non_finite(level, partials, increments, "sum of regions")

        increments.append(inc)
        partials.append(partials[-1] + inc if partials else inc)
        if level < 4:
            continue

        ratios = _increment_ratios(increments[1:])
        last3 = ratios[-3:]
        monotone = all(x > 0 for x in increments[1:])
        if all(r <= 0.9 for r in last3) and partials[-1] > 0 and partials[-1] / partials[-2] - 1.0 < 1e-3:
            r = last3[-1]
            tail = increments[-1] * r / (1.0 - r) if r > 0 else 0.0
            logger.debug(f"[NORM] finite after {level} levels, tail={tail:.3e}")
            return NormResult("finite", partials, increments, value=partials[-1] + tail,
                              err_est=errs + tail, reason=f"settled after {level} levels")
        if monotone and partials[0] > 0 and partials[-1] / partials[0] > 10 and all(r >= 0.95 for r in last3):
            return NormResult("divergent", partials, increments,
                              reason=f"growth x{partials[-1] / partials[0]:.3g} after {level} levels")

    raise InconclusiveError(
        f"No plateau and no tenfold growth within {max_level} levels (eta={eta}, m={m}, mu={mu})",
        partial=partials,
    )


# ============================================================
# Divergence probes
# ============================================================

def _probe_constants(w: WormPoint, mu: float) -> Tuple[float, float]:
    c1 = math.log(abs(w.z1) / 2.0)
    c2 = (0.5 * math.pi + mu + abs(log_frame(w).imag)) ** 2
    return c1, c2


def divergence_probe(
    kind: ProbeKind,
    w,
    delta_ladder: Optional[Sequence[float]] = None,
    *,
    p: float = 4.0,
    s: float = 0.25,
    mu: float = 1.0,
    eps: float = 0.5,
    t: float = 0.0,
    tol: float = 1e-10,
) -> ProbeResult:
    """
    Partial integrals over [delta, eps] of the lower-bound integrands

        lp      : r^(1-p) / [(log(r/2) + c1)^2 + c2]^p
        l2      : the lp integrand at p = 2 (convergent control)
        sobolev : 1 / (|r - 2 cos t|^s r^(1+s) [(log(r/2) + c1)^2 + c2]^2)

    with c1 = log(|w1|/2), c2 = (pi/2 + mu + |Im L(w)|)^2.
    """
    kind = ProbeKind(kind)
    w = WormPoint.coerce(w)
    if kind == ProbeKind.LP and not p > 2:
        raise DomainError(f"The Lp probe needs p > 2, got {p}")
    if kind == ProbeKind.SOBOLEV and not 0 < s < 0.5:
        raise DomainError(f"The Sobolev probe needs 0 < s < 1/2, got {s}")
    if kind == ProbeKind.L2:
        p = 2.0

    if delta_ladder is None:
        delta_ladder = DEFAULT_SOBOLEV_LADDER if kind == ProbeKind.SOBOLEV else DEFAULT_LP_LADDER
    deltas = [float(d) for d in delta_ladder]
    if not deltas or any(d <= 0 for d in deltas) or deltas[0] >= eps:
        raise DomainError("The ladder must be positive and below eps")
    if any(b >= a for a, b in zip(deltas[:-1], deltas[1:])):
        raise DomainError("The ladder must be strictly decreasing")

    c1, c2 = _probe_constants(w, mu)
    two_cos_t = 2.0 * math.cos(t)

    def radial(r):
        L = np.log(r / 2.0) + c1
        if kind == ProbeKind.SOBOLEV:
            return 1.0 / (np.abs(r - two_cos_t) ** s * r ** (1.0 + s) * (L * L + c2) ** 2)
        return r ** (1.0 - p) / (L * L + c2) ** p

    def integrand(x):
        r = np.exp(x)
        return r * radial(r)

    increments: List[float] = []
    partials: List[float] = []
    upper = eps
    for delta in deltas:
        inc = float(integrate_adaptive(integrand, math.log(delta), math.log(upper), tol, tol_abs=1e-300).value)
        increments.append(inc)
        partials.append(partials[-1] + inc if partials else inc)
        upper = delta

    exponents = []
    for i in range(2, len(deltas)):
        if increments[i] > 0 and increments[i - 1] > 0:
            exponents.append(math.log(increments[i] / increments[i - 1]) / math.log(deltas[i - 1] / deltas[i]))
        else:
            exponents.append(float("nan"))

    parameter = s if kind == ProbeKind.SOBOLEV else p
    logger.debug(f"[PROBE] {kind.value}({parameter}) growth={partials[-1] / partials[0]:.4g}")
    return ProbeResult(kind, parameter, deltas, partials, increments, exponents)


# ============================================================
# Decay in j
# ============================================================

def _fit_direction(sep: Separation, js: Sequence[int], tol: float) -> Tuple[List[int], List[float]]:
    ks, logs = [], []
    for j in js:
        value = abs(kernel_from_lambda(j, sep, tol).value)
        if value < UNDERFLOW_GUARD:
            break
        ks.append(abs(j + 1))
        logs.append(math.log(value))
    return ks, logs


def _slope(ks: List[int], logs: List[float]) -> float:
    if len(ks) < 2:
        raise DomainError("Too few terms above the underflow guard to fit a decay rate")
    return float(np.polyfit(np.asarray(ks, dtype=float), np.asarray(logs), 1)[0])


def decay_estimate(z1, w1, j_max: int = 60, tol: float = 1e-8, *, k_min: Optional[int] = None) -> DecayFit:
    """Least-squares slope of log|K_j| against |j+1| over [k_min, j_max] (default k_min = j_max//2), both directions."""
    if j_max < 4:
        raise DomainError("j_max must be at least 4")
    z = HalfPlanePoint.coerce(z1)
    w = HalfPlanePoint.coerce(w1)
    if not (z.interior and w.interior):
        raise DomainError("decay_estimate needs an interior pair")
    sep = Separation.from_points(z, w)

    k_lo = j_max // 2 if k_min is None else k_min
    if not 0 <= k_lo < j_max:
        raise DomainError("k_min must lie in [0, j_max)")
    ks_plus, logs_plus = _fit_direction(sep, [k - 1 for k in range(k_lo, j_max + 1)], tol)
    ks_minus, logs_minus = _fit_direction(sep, [-k - 1 for k in range(k_lo, j_max + 1)], tol)
    return DecayFit(
        lam=sep.lam,
        b_lambda=b_lambda(sep),
        rate_plus=_slope(ks_plus, logs_plus),
        rate_minus=_slope(ks_minus, logs_minus),
        ks=ks_plus,
        log_abs_plus=logs_plus,
        log_abs_minus=logs_minus,
    )
