"""
Adaptive quadrature.

Provides:
 - integrate_adaptive: globally adaptive Gauss-Kronrod (G10/K21) bisection on a
   finite interval, vectorised over numpy node arrays, real / complex /
   vector-valued integrands
 - integrate_halfline: (0, inf) integrals, truncated where the log-magnitude of
   the integrand has fallen 40 nats below its peak, then mapped either by the
   exp-sinh map x = exp(pi/2 sinh t) or the rational map x = t/(1-t)
 - integrate_2d: iterated (tensor) adaptive quadrature or seeded Monte Carlo
   over a planar Region
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from core.errors import DecayDetectionError, DomainError, NonFiniteIntegrandError, QuadratureNonconvergenceError


logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_TOL_ABS = 1e-15
DEFAULT_BUDGET = 400_000
DECAY_NATS = 40.0

# Tolerance rungs shared by the main routines and their oracles.
TOLERANCE_LADDER = (1e-4, 1e-6, 1e-8, 1e-10, 1e-12)


# ============================================================
# Gauss-Kronrod 10/21 rule (QUADPACK qk21 abscissae and weights)
# ============================================================

_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])

_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525634254,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])

_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])


def _mirror(half: np.ndarray) -> np.ndarray:
    """Expand the 11 non-negative entries into the full 21-point layout."""
    return np.concatenate([half[:-1], half[::-1]])


_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W_KRONROD = _mirror(_WGK)
_wg_half = np.zeros(11)
_wg_half[[1, 3, 5, 7, 9]] = _WG
_W_GAUSS = _mirror(_wg_half)
RULE_SIZE = _NODES.size

_EPS = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


# ============================================================
# Results
# ============================================================

@dataclass
class QuadratureResult:
    """Value of an integral with its a-posteriori error estimate."""
    value: Any
    err_est: float
    nodes_used: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.err_est < 0:
            raise ValueError("err_est must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "err_est": self.err_est,
            "nodes_used": self.nodes_used,
            "metadata": self.metadata,
        }


def snap_tolerance(tol: float) -> float:
    """Return the loosest ladder rung that is at least as strict as tol."""
    for rung in TOLERANCE_LADDER:
        if rung <= tol:
            return rung
    return TOLERANCE_LADDER[-1]


def _norm(value: Any) -> float:
    return float(np.max(np.abs(value))) if np.ndim(value) else float(abs(value))


# ============================================================
# Single panel
# ============================================================

def _gk_panel(f: Callable, a: float, b: float) -> Tuple[Any, float]:
    """Apply the 21-point Kronrod rule on [a, b]; return (value, error)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = np.asarray(f(center + half * _NODES))

    if not np.all(np.isfinite(y)):
        raise NonFiniteIntegrandError(f"Integrand is not finite on [{a:.6g}, {b:.6g}]", interval=(a, b))

    kronrod = half * np.tensordot(_W_KRONROD, y, axes=(0, 0))
    gauss = half * np.tensordot(_W_GAUSS, y, axes=(0, 0))
    resabs = half * np.tensordot(_W_KRONROD, np.abs(y), axes=(0, 0))
    mean = kronrod / (2.0 * half) if half else kronrod
    resasc = half * np.tensordot(_W_KRONROD, np.abs(y - mean), axes=(0, 0))

    err = np.abs(kronrod - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            (resasc != 0) & (err != 0),
            resasc * np.minimum(1.0, (200.0 * err / np.where(resasc != 0, resasc, 1.0)) ** 1.5),
            err,
        )
    floor = np.where(resabs > _UFLOW / (50 * _EPS), 50 * _EPS * resabs, 0.0)
    err = np.maximum(scaled, floor)

    return kronrod, float(np.max(err))


# ============================================================
# Finite interval
# ============================================================

def integrate_adaptive(
    f: Callable[[np.ndarray], Any],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    budget: int = DEFAULT_BUDGET,
    points: Optional[Sequence[float]] = None,
) -> QuadratureResult:
    """
    Integrate f over [a, b] by globally adaptive bisection.

    f receives a 1-D array of abscissae and returns values of shape (n,) or
    (n, m). The panel with the largest error estimate is always split next, so
    the subdivision order (and the result) is deterministic.

    Raises QuadratureNonconvergenceError carrying the partial result when the
    node budget is exhausted before max(tol*|value|, tol_abs) is met.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise DomainError(f"integrate_adaptive needs finite a < b, got [{a}, {b}]")
    if tol <= 0:
        raise DomainError("tol must be positive")

    cuts = [a] + sorted(float(p) for p in (points or ()) if a < p < b) + [b]

    heap = []
    counter = 0
    nodes = 0
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        value, err = _gk_panel(f, lo, hi)
        nodes += RULE_SIZE
        heapq.heappush(heap, (-err, counter, lo, hi, value))
        counter += 1
        total = total + value
        total_err += err

    while total_err > max(tol * _norm(total), tol_abs):
        if nodes + 2 * RULE_SIZE > budget:
            partial = _collect(heap, nodes)
            logger.debug(f"[QUAD] budget exhausted on [{a:.6g}, {b:.6g}] err={total_err:.3e}")
            raise QuadratureNonconvergenceError(
                f"Adaptive quadrature did not reach tol={tol:.1e} within {budget} nodes "
                f"(err_est={total_err:.3e})",
                partial=partial,
            )

        neg_err, _, lo, hi, value = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_err, counter, lo, hi, value))
            raise QuadratureNonconvergenceError(
                f"Panel [{lo:.17g}, {hi:.17g}] cannot be bisected further",
                partial=_collect(heap, nodes),
            )

        left, left_err = _gk_panel(f, lo, mid)
        right, right_err = _gk_panel(f, mid, hi)
        nodes += 2 * RULE_SIZE

        heapq.heappush(heap, (-left_err, counter, lo, mid, left))
        heapq.heappush(heap, (-right_err, counter + 1, mid, hi, right))
        counter += 2

        total = total - value + left + right
        total_err = total_err + neg_err + left_err + right_err

    return _collect(heap, nodes)


def _collect(heap, nodes: int) -> QuadratureResult:
    """Sum panels left to right so the reduction order never depends on the heap."""
    panels = sorted(heap, key=lambda item: item[2])
    value = 0.0
    err = 0.0
    for neg_err, _, _, _, panel_value in panels:
        value = value + panel_value
        err += -neg_err
    if np.ndim(value) == 0:
        value = value.item() if hasattr(value, "item") else value
    return QuadratureResult(
        value=value,
        err_est=float(err),
        nodes_used=nodes,
        metadata={"panels": len(panels)},
    )


# ============================================================
# Half line
# ============================================================

_SCAN = 2.0 ** (np.arange(-160, 193) / 4.0)  # 2^-40 .. 2^48
_X_FLOOR = 1e-200


def find_cutoff(
    f: Callable[[np.ndarray], Any],
    log_magnitude: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    decay_nats: float = DECAY_NATS,
) -> float:
    """
    Return the first scan point past which log|f| stays decay_nats below its peak.

    Returns 0.0 when the integrand vanishes on the whole scan.
    """
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        if log_magnitude is not None:
            lm = np.asarray(log_magnitude(_SCAN), dtype=float)
        else:
            values = np.abs(np.asarray(f(_SCAN)))
            if values.ndim > 1:
                values = values.max(axis=1)
            lm = np.log(values)
    lm = np.where(np.isnan(lm), -np.inf, lm)

    peak = lm.max()
    if not np.isfinite(peak):
        if peak > 0:
            raise DecayDetectionError("Integrand overflows on the half-line scan")
        return 0.0

    above = np.nonzero(lm >= peak - decay_nats)[0]
    last = above[-1]
    if last >= _SCAN.size - 1:
        raise DecayDetectionError(
            f"Integrand has not decayed {decay_nats:g} nats below its peak by x={_SCAN[-1]:.3g}"
        )
    return float(_SCAN[last + 1])


def integrate_halfline(
    f: Callable[[np.ndarray], Any],
    tol: float = DEFAULT_TOL,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    budget: int = DEFAULT_BUDGET,
    transform: str = "exp-sinh",
    log_magnitude: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    decay_nats: float = DECAY_NATS,
) -> QuadratureResult:
    """
    Integrate f over (0, inf).

    The integrand is truncated at the point where its log-magnitude (computed
    from f, or supplied directly as log_magnitude) has fallen decay_nats below
    the peak, then integrated after one of two changes of variables:

      exp-sinh : x = exp(pi/2 * sinh t)
      rational : x = t / (1 - t)
    """
    cutoff = find_cutoff(f, log_magnitude, decay_nats)
    if cutoff == 0.0:
        return QuadratureResult(value=0.0, err_est=0.0, nodes_used=0,
                                metadata={"transform": transform, "cutoff": 0.0})

    if transform == "exp-sinh":
        t_lo = np.arcsinh(2.0 / np.pi * np.log(_X_FLOOR))
        t_hi = np.arcsinh(2.0 / np.pi * np.log(cutoff))

        def mapped(t):
            x = np.exp(0.5 * np.pi * np.sinh(t))
            jac = x * 0.5 * np.pi * np.cosh(t)
            y = np.asarray(f(x))
            return y * (jac if y.ndim == 1 else jac[:, None])

        result = integrate_adaptive(mapped, t_lo, t_hi, tol, tol_abs=tol_abs, budget=budget)

    elif transform == "rational":
        t_hi = cutoff / (1.0 + cutoff)

        def mapped(t):
            x = t / (1.0 - t)
            jac = 1.0 / (1.0 - t) ** 2
            y = np.asarray(f(x))
            return y * (jac if y.ndim == 1 else jac[:, None])

        result = integrate_adaptive(mapped, 0.0, t_hi, tol, tol_abs=tol_abs, budget=budget)

    else:
        raise DomainError(f"Unknown half-line transform '{transform}'")

    result.metadata.update({"transform": transform, "cutoff": cutoff})
    logger.debug(f"[QUAD] half-line {transform} cutoff={cutoff:.4g} nodes={result.nodes_used}")
    return result


# ============================================================
# Planar regions
# ============================================================

@dataclass(frozen=True)
class Region:
    """
    A planar integration region described by a bounding box plus either
    exact y-limits per x (preferred by tensor mode) or an indicator.
    """
    x_range: Tuple[float, float]
    y_range: Tuple[float, float]
    indicator: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    y_limits: Optional[Callable[[float], Tuple[float, float]]] = None
    label: str = "box"
    x_points: Tuple[float, ...] = ()
    y_points: Tuple[float, ...] = ()

    @classmethod
    def box(cls, x0: float, x1: float, y0: float, y1: float, *,
            x_points: Sequence[float] = (), y_points: Sequence[float] = ()) -> "Region":
        """Rectangle; x_points / y_points are breakpoints handed to the adaptive rules."""
        if not (x0 < x1 and y0 < y1):
            raise DomainError("Box needs x0 < x1 and y0 < y1")
        return cls(x_range=(x0, x1), y_range=(y0, y1), label="box",
                   x_points=tuple(x_points), y_points=tuple(y_points))

    @classmethod
    def disk(cls, center: complex, radius: float) -> "Region":
        cx, cy = complex(center).real, complex(center).imag

        def indicator(x, y):
            return (x - cx) ** 2 + (y - cy) ** 2 < radius ** 2

        def y_limits(x):
            h = np.sqrt(max(radius ** 2 - (x - cx) ** 2, 0.0))
            return cy - h, cy + h

        return cls(
            x_range=(cx - radius, cx + radius),
            y_range=(cy - radius, cy + radius),
            indicator=indicator,
            y_limits=y_limits,
            label="disk",
        )

    @property
    def box_area(self) -> float:
        return (self.x_range[1] - self.x_range[0]) * (self.y_range[1] - self.y_range[0])

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        inside = ((x >= self.x_range[0]) & (x <= self.x_range[1])
                  & (y >= self.y_range[0]) & (y <= self.y_range[1]))
        if self.indicator is not None:
            inside = inside & self.indicator(x, y)
        return inside


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], Any],
    region: Region,
    *,
    budget: int = 4_000_000,
    mode: str = "tensor",
    tol: float = 1e-8,
    tol_abs: float = DEFAULT_TOL_ABS,
    seed: Optional[int] = None,
) -> QuadratureResult:
    """
    Integrate f(x, y) over a Region.

    tensor      : outer adaptive rule in x, inner adaptive rule in y for every
                  outer node; err_est adds the outer estimate and the worst
                  inner estimate times the x-extent
    monte-carlo : budget uniform samples in the bounding box from a seeded
                  numpy Generator; err_est is one standard error
    """
    if mode == "tensor":
        return _integrate_tensor(f, region, budget, tol, tol_abs)
    if mode == "monte-carlo":
        return _integrate_monte_carlo(f, region, budget, seed)
    raise DomainError(f"Unknown 2-D mode '{mode}'")


def _integrate_tensor(f, region: Region, budget: int, tol: float, tol_abs: float) -> QuadratureResult:
    x0, x1 = region.x_range
    width = x1 - x0
    state = {"nodes": 0, "inner_err": 0.0}

    def outer(xs: np.ndarray) -> np.ndarray:
        out = []
        for x in xs:
            if region.y_limits is not None:
                y0, y1 = region.y_limits(float(x))
            else:
                y0, y1 = region.y_range
            if not y1 > y0:
                out.append(0.0)
                continue

            def inner(ys, x=float(x)):
                values = np.asarray(f(np.full_like(ys, x), ys))
                if region.y_limits is None and region.indicator is not None:
                    values = np.where(region.indicator(np.full_like(ys, x), ys), values, 0.0)
                return values

            remaining = budget - state["nodes"]
            if remaining < 2 * RULE_SIZE:
                raise QuadratureNonconvergenceError(
                    f"2-D tensor quadrature exhausted its budget of {budget} nodes"
                )
            res = integrate_adaptive(inner, y0, y1, 0.5 * tol, tol_abs=0.5 * tol_abs / width,
                                     budget=remaining, points=region.y_points)
            state["nodes"] += res.nodes_used
            state["inner_err"] = max(state["inner_err"], res.err_est)
            out.append(res.value)
        return np.asarray(out)

    res = integrate_adaptive(outer, x0, x1, 0.5 * tol, tol_abs=0.5 * tol_abs, budget=budget,
                             points=region.x_points)
    err = res.err_est + width * state["inner_err"]
    return QuadratureResult(
        value=res.value,
        err_est=float(err),
        nodes_used=min(state["nodes"], budget),
        metadata={"mode": "tensor", "region": region.label,
                  "x_range": list(region.x_range), "y_range": list(region.y_range)},
    )


def _integrate_monte_carlo(f, region: Region, budget: int, seed: Optional[int]) -> QuadratureResult:
    rng = np.random.default_rng(seed)
    (x0, x1), (y0, y1) = region.x_range, region.y_range
    chunk = 100_000
    total = 0.0
    total_sq = 0.0
    drawn = 0

    while drawn < budget:
        n = min(chunk, budget - drawn)
        x = rng.uniform(x0, x1, n)
        y = rng.uniform(y0, y1, n)
        inside = region.contains(x, y)
        values = np.asarray(f(x[inside], y[inside])) if inside.any() else np.zeros(0)
        if not np.all(np.isfinite(values)):
            raise NonFiniteIntegrandError(f"Integrand is not finite on {region.label}")
        total = total + values.sum()
        total_sq += float(np.sum(np.abs(values) ** 2))
        drawn += n

    mean = total / drawn
    variance = max(total_sq / drawn - abs(mean) ** 2, 0.0)
    area = region.box_area
    value = area * mean
    if np.ndim(value) == 0 and hasattr(value, "item"):
        value = value.item()
    return QuadratureResult(
        value=value,
        err_est=float(area * np.sqrt(variance / drawn)),
        nodes_used=drawn,
        metadata={"mode": "monte-carlo", "seed": seed, "region": region.label},
    )
