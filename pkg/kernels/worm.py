"""
Bergman kernels of the unwound worm U and of the worm W as j-series.

    K_U(z, w) = (z2 conj w2)^-1  sum_j K_j(z1, w1) zeta^{j+1},
                zeta = e^{-(z1 + conj w1)/2} z2 conj w2
    K_W(z, w) = (z1 conj w1 z2 conj w2)^-1  sum_j K_j(ell(z), ell(w)) zeta_W^{j+1},
                zeta_W = E_{i/2}(z) z2 conj(E_{i/2}(w) w2)

Each direction of the series is summed until the a-posteriori geometric tail
drops below the requested tolerance. The boundary profile

    g(zeta) = (1/pi^3) sum_k (k pi/2) / sinh(k pi/2) zeta^k

is available as the raw Laurent series and through its pole split.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from core.errors import AnnulusMarginError, DomainError, NearSingularSetError
from core.settings import get_settings
from geometry.worm import (
    Domain,
    UPoint,
    WormPoint,
    contains,
    ell_principal,
    frame as worm_frame,
)
from .base import KernelResult, Representation, Separation
from .halfplane import b_lambda, kernel_from_lambda


logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
TERM_CAP = 400
_PI3 = math.pi ** 3
_Q = math.exp(-math.pi / 2.0)
_Q_INV = math.exp(math.pi / 2.0)
ANNULUS_MARGIN = 1e-4


# ============================================================
# Truncation policy and diagnostics
# ============================================================

class TruncationPolicy(BaseModel):
    """How the j-series is cut."""
    tol: float = Field(DEFAULT_TOL, gt=0, description="Relative tolerance on the summed series")
    term_cap: int = Field(TERM_CAP, ge=3, description="Maximum |j+1| before giving up")
    min_terms: int = Field(3, ge=2, description="Terms per direction before the tail test applies")
    tail_fraction: float = Field(0.5, gt=0, le=1, description="Share of tol granted to the tails")
    window: Optional[int] = Field(None, ge=0, description="Sum exactly |j+1| <= window when set")


@dataclass
class SeriesDiagnostics:
    """Window and tail of a summed j-series."""
    j_min: int
    j_max: int
    tail_bound: float
    terms: int
    ratio_plus: float = float("nan")
    ratio_minus: float = float("nan")
    ratio_theory: Tuple[float, float] = (float("nan"), float("nan"))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j_window": [self.j_min, self.j_max],
            "tail_bound": self.tail_bound,
            "terms": self.terms,
            "ratio_plus": self.ratio_plus,
            "ratio_minus": self.ratio_minus,
            "ratio_theory": list(self.ratio_theory),
        }


# ============================================================
# Series core
# ============================================================

@dataclass
class _Direction:
    sign: int
    total: complex = 0j
    err: float = 0.0
    mags: List[float] = field(default_factory=list)
    done: bool = False
    tail: float = math.inf
    ratio: float = math.nan


def _ratio(mags: List[float]) -> float:
    def one(a: float, b: float) -> float:
        if b == 0.0:
            return 0.0 if a == 0.0 else math.inf
        return a / b
    return max(one(mags[-1], mags[-2]), one(mags[-2], mags[-3]))


def _sum_series(sep: Separation, log_zeta: complex, policy: TruncationPolicy) -> Tuple[complex, float, SeriesDiagnostics]:
    """sum_k K_{k-1}(lambda) zeta^k over k in Z with a certified geometric tail."""
    b = b_lambda(sep)
    log_abs = log_zeta.real
    theory = (math.exp(-b + log_abs), math.exp(-b - log_abs))
    head = kernel_from_lambda(-1, sep, policy.tol)
    head_scale = max(abs(head.value), 1e-300)
    # K_j depends on |j+1| only
    memo: Dict[int, KernelResult] = {0: head}

    def component(k_abs: int) -> KernelResult:
        if k_abs not in memo:
            tol_abs = max(1e-2 * policy.tol * head_scale * math.exp(-k_abs * abs(log_abs)), 1e-300)
            memo[k_abs] = kernel_from_lambda(k_abs - 1, sep, policy.tol, tol_abs=tol_abs)
        return memo[k_abs]

    def term(k: int) -> Tuple[complex, float]:
        res = component(abs(k))
        if res.value == 0:
            return 0j, 0.0
        return cmath.exp(cmath.log(res.value) + k * log_zeta), res.err_est * math.exp(k * log_abs)

    total_head = head.value
    err_head = head.err_est

    dirs = [_Direction(+1), _Direction(-1)]
    k = 0
    while not all(d.done for d in dirs):
        k += 1
        if policy.window is not None and k > policy.window:
            break
        if k > policy.term_cap:
            partial = SeriesDiagnostics(-policy.term_cap - 1, policy.term_cap - 1, math.inf, 2 * policy.term_cap + 1,
                                        dirs[0].ratio, dirs[1].ratio, theory)
            raise NearSingularSetError(
                f"j-series did not converge within {policy.term_cap} terms per direction "
                f"(lambda={sep.lam:.6g}, |zeta|={math.exp(log_abs):.6g})",
                partial=partial,
            )

        running = abs(total_head + dirs[0].total + dirs[1].total)
        for d in dirs:
            if d.done:
                continue
            value, err = term(d.sign * k)
            d.total += value
            d.err += err
            d.mags.append(abs(value))
            if len(d.mags) < 3:
                continue
            d.ratio = _ratio(d.mags)
            rho = max(d.ratio, theory[0] if d.sign > 0 else theory[1])
            if rho < 1.0:
                d.tail = d.mags[-1] * rho / (1.0 - rho)
                if (policy.window is None and len(d.mags) >= policy.min_terms
                        and d.tail <= policy.tail_fraction * policy.tol * max(running, abs(total_head))):
                    d.done = True

    n_plus = len(dirs[0].mags)
    n_minus = len(dirs[1].mags)
    total = total_head + dirs[0].total + dirs[1].total
    tail = sum(d.tail if len(d.mags) >= 3 else (0.0 if policy.window == 0 else math.inf) for d in dirs)
    diag = SeriesDiagnostics(
        j_min=-n_minus - 1,
        j_max=n_plus - 1,
        tail_bound=tail,
        terms=1 + n_plus + n_minus,
        ratio_plus=dirs[0].ratio,
        ratio_minus=dirs[1].ratio,
        ratio_theory=theory,
    )
    logger.debug(f"[SERIES] lambda={sep.lam:.6g} window=[{diag.j_min}, {diag.j_max}] tail={tail:.3e}")
    return total, err_head + dirs[0].err + dirs[1].err, diag


def _policy(tol: float, policy: Optional[TruncationPolicy], window: Optional[int]) -> TruncationPolicy:
    if policy is None:
        policy = TruncationPolicy(tol=tol, term_cap=get_settings().term_cap)
    if window is not None:
        policy = policy.model_copy(update={"window": window})
    return policy


# ============================================================
# Kernels of U and W
# ============================================================

def kernel_U(
    z,
    w,
    tol: float = DEFAULT_TOL,
    *,
    policy: Optional[TruncationPolicy] = None,
    window: Optional[int] = None,
) -> KernelResult:
    """Bergman kernel of U at interior points z, w."""
    z, w = UPoint.coerce(z), UPoint.coerce(w)
    for p in (z, w):
        if not contains(Domain.U, p):
            raise DomainError(f"({p.w1}, {p.w2}) is not an interior point of U")
    policy = _policy(tol, policy, window)

    sep = Separation.from_points(z.w1, w.w1)
    log_zeta = -(z.w1 + w.w1.conjugate()) / 2.0 + cmath.log(z.w2) + cmath.log(w.w2).conjugate()
    total, err, diag = _sum_series(sep, log_zeta, policy)

    prefactor = 1.0 / (z.w2 * w.w2.conjugate())
    return KernelResult(
        value=total * prefactor,
        err_est=(err + diag.tail_bound) * abs(prefactor),
        representation=Representation.SERIES,
        diagnostics={"lambda": sep.lam, "zeta": cmath.exp(log_zeta)},
        series=diag,
    )


def _worm_frame(z: WormPoint, frame_kind: str) -> Tuple[complex, complex]:
    """(ell, L) in the general or the principal frame."""
    if frame_kind == "general":
        fr = worm_frame(z)
        return fr.ell, fr.L
    if frame_kind == "principal":
        if abs(z.theta) >= math.pi / 2.0:
            raise DomainError("The principal frame needs |log|z2|^2| < pi/2")
        ell = ell_principal(z)
        return ell, cmath.log(z.z1)
    raise DomainError(f"Unknown frame '{frame_kind}'")


def kernel_W(
    z,
    w,
    tol: float = DEFAULT_TOL,
    *,
    frame: str = "general",
    policy: Optional[TruncationPolicy] = None,
    window: Optional[int] = None,
) -> KernelResult:
    """Bergman kernel of W at interior points z, w."""
    z, w = WormPoint.coerce(z), WormPoint.coerce(w)
    for p in (z, w):
        if not contains(Domain.W, p):
            raise DomainError(f"({p.z1}, {p.z2}) is not an interior point of W")
    policy = _policy(tol, policy, window)

    ell_z, L_z = _worm_frame(z, frame)
    ell_w, L_w = _worm_frame(w, frame)
    sep = Separation(-1j * (ell_z - ell_w.conjugate()))
    log_zeta = (0.5j * L_z + cmath.log(z.z2)) + (0.5j * L_w + cmath.log(w.z2)).conjugate()
    total, err, diag = _sum_series(sep, log_zeta, policy)

    prefactor = 1.0 / (z.z1 * w.z1.conjugate() * z.z2 * w.z2.conjugate())
    return KernelResult(
        value=total * prefactor,
        err_est=(err + diag.tail_bound) * abs(prefactor),
        representation=Representation.SERIES,
        diagnostics={"lambda": sep.lam, "zeta": cmath.exp(log_zeta), "frame": frame},
        series=diag,
    )


def normalized_kernel(domain: Union[Domain, str], z, w, tol: float = DEFAULT_TOL) -> complex:
    """
    G(z, w) = z2 conj(w2) (z1 - conj w1)^2 K_U       on U
    H(z, w) = z1 conj(w1) z2 conj(w2) (ell(z) - conj ell(w))^2 K_W   on W
    """
    domain = Domain(domain)
    if domain == Domain.U:
        z, w = UPoint.coerce(z), UPoint.coerce(w)
        k = kernel_U(z, w, tol).value
        return z.w2 * w.w2.conjugate() * (z.w1 - w.w1.conjugate()) ** 2 * k
    if domain == Domain.W:
        z, w = WormPoint.coerce(z), WormPoint.coerce(w)
        k = kernel_W(z, w, tol).value
        d = worm_frame(z).ell - worm_frame(w).ell.conjugate()
        return z.z1 * w.z1.conjugate() * z.z2 * w.z2.conjugate() * d ** 2 * k
    raise DomainError("normalized_kernel is defined on U and W")


# ============================================================
# Boundary profile g
# ============================================================

def g_coefficient(k):
    """(1/pi^3) (k pi/2) / sinh(k pi/2), with 1/pi^3 at k = 0."""
    k = np.abs(np.asarray(k, dtype=float))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        x = np.where(k == 0, 1.0, 0.5 * math.pi * k)
        value = np.where(k == 0, 1.0, 2.0 * x * np.exp(-x) / -np.expm1(-2.0 * x))
    value = value / _PI3
    return value if value.ndim else float(value)


def _annulus_check(zeta: complex) -> float:
    if zeta == 0:
        raise AnnulusMarginError("zeta = 0 lies outside the annulus")
    log_abs = abs(math.log(abs(zeta)))
    if log_abs >= math.pi / 2.0:
        raise AnnulusMarginError(f"|zeta| = {abs(zeta):.6g} lies outside e^(-pi/2) < |zeta| < e^(pi/2)")
    return _Q * math.exp(log_abs)


def _g_series(zeta: complex, tol: float) -> Tuple[complex, float, int]:
    rho_inf = _annulus_check(zeta)
    if rho_inf > 1.0 - ANNULUS_MARGIN:
        raise AnnulusMarginError(
            f"|zeta| = {abs(zeta):.6g} is within {ANNULUS_MARGIN:g} of the annulus edge; use route='split'"
        )
    log_zeta = cmath.log(zeta)
    n = 16
    while True:
        k = np.arange(1, n + 1, dtype=float)
        log_c = np.log(k * math.pi) - 0.5 * math.pi * k - np.log1p(-np.exp(-math.pi * k))
        terms = np.exp(log_c + k * log_zeta) + np.exp(log_c - k * log_zeta)
        total = 1.0 + np.sum(terms)
        rho = (n + 1.0) / n * rho_inf
        if rho < 1.0:
            last = math.exp(log_c[-1]) * (math.exp(n * log_zeta.real) + math.exp(-n * log_zeta.real))
            tail = last * rho / (1.0 - rho)
            if tail <= 0.5 * tol * abs(total):
                return complex(total) / _PI3, tail / _PI3, n
        n *= 2
        if n > 1 << 24:
            raise AnnulusMarginError(f"g series did not converge at zeta = {zeta}")


def _g_split(zeta: complex, tol: float) -> Tuple[complex, float, int]:
    _annulus_check(zeta)
    poles = (_Q * zeta / (1.0 - _Q * zeta) ** 2 + _Q_INV * zeta / (1.0 - _Q_INV * zeta) ** 2) / math.pi ** 2

    def rest(x: complex) -> Tuple[complex, float, int]:
        total = 0j
        m = 1
        while True:
            q_m = math.exp(-(m + 0.5) * math.pi)
            t = q_m * x / (1.0 - q_m * x) ** 2
            total += t
            if abs(t) <= 1e-3 * tol or m >= 64:
                return math.pi * total, math.pi * abs(t), m
            m += 1

    f_plus, e_plus, m_plus = rest(zeta)
    f_minus, e_minus, m_minus = rest(1.0 / zeta)
    value = poles + (1.0 + f_plus + f_minus) / _PI3
    return value, (e_plus + e_minus) / _PI3, max(m_plus, m_minus)


def g_boundary(zeta: complex, tol: float = DEFAULT_TOL, route: str = "auto") -> KernelResult:
    """
    g(zeta) on the annulus e^(-pi/2) < |zeta| < e^(pi/2).

    route: "series" (Laurent series), "split" (the two poles at e^(+-pi/2)
    plus a rapidly convergent remainder), or "auto" (series while the
    coefficient ratio stays below 1/2).
    """
    zeta = complex(zeta)
    if route == "auto":
        route = "series" if _annulus_check(zeta) <= 0.5 else "split"
    if route == "series":
        value, err, n = _g_series(zeta, tol)
    elif route == "split":
        value, err, n = _g_split(zeta, tol)
    else:
        raise DomainError(f"Unknown g route '{route}'")
    return KernelResult(
        value=value,
        err_est=err,
        representation=Representation.SERIES,
        diagnostics={"route": route, "terms": n},
    )


def g_probe_circle(radius: float, count: int = 64, tol: float = 1e-8) -> List[Tuple[float, complex]]:
    """(angle, g(radius e^{i angle})) at count equally spaced angles in [0, 2 pi)."""
    if count < 1:
        raise DomainError("count must be positive")
    out = []
    for angle in np.linspace(0.0, 2.0 * math.pi, count, endpoint=False):
        zeta = radius * cmath.exp(1j * angle)
        out.append((float(angle), g_boundary(zeta, tol).value))
    return out
