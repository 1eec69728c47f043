"""
Grid sweeps.

- AxisSpec: one axis, parsed from "var:start:stop:count[:log]"
- GridSpec: axes + fixed coordinates + target
- evaluate_grid: data-parallel evaluation, rows returned in index order

Targets:
- kernel-j : K_j(lambda), axes lambda_re / lambda_im, fixed j (default -1)
- gfun     : g(zeta), axes zeta_re / zeta_im or radius / angle
- worm-h   : H(z, w) along z = (r e^{i phi}, z2), axes r / phi,
             fixed z2_re, z2_im, w1_re, w1_im, w2_re, w2_im
"""

from __future__ import annotations

import asyncio
import cmath
import itertools
import logging
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from geometry.worm import WormPoint, frame as worm_frame
from kernels.halfplane import kernel_from_lambda
from kernels.worm import g_boundary, kernel_W


logger = logging.getLogger(__name__)


class GridTarget(str, Enum):
    KERNEL_J = "kernel-j"
    GFUN = "gfun"
    WORM_H = "worm-h"


_AXES = {
    GridTarget.KERNEL_J: ({"lambda_re", "lambda_im"},),
    GridTarget.GFUN: ({"zeta_re", "zeta_im"}, {"radius", "angle"}),
    GridTarget.WORM_H: ({"r", "phi"},),
}

_FIXED_DEFAULTS = {
    GridTarget.KERNEL_J: {"j": -1.0, "lambda_re": 1.0, "lambda_im": 0.0},
    GridTarget.GFUN: {"zeta_re": 1.0, "zeta_im": 0.0, "radius": 1.0, "angle": 0.0},
    GridTarget.WORM_H: {"r": 1.0, "phi": 0.0, "z2_re": 1.0, "z2_im": 0.0,
                        "w1_re": 1.0, "w1_im": 0.0, "w2_re": 1.0, "w2_im": 0.0},
}


# ============================================================
# Specs
# ============================================================

class AxisSpec(BaseModel):
    """One grid axis."""
    variable: str = Field(..., description="Coordinate swept along this axis")
    start: float = Field(..., description="First value")
    stop: float = Field(..., description="Last value")
    count: int = Field(..., ge=2, description="Number of points, endpoints included")
    scale: Literal["linear", "log"] = Field("linear", description="Spacing")

    @model_validator(mode="after")
    def validate_range(self) -> "AxisSpec":
        if self.start == self.stop:
            raise ValueError(f"Axis '{self.variable}' needs start != stop")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ValueError(f"Log axis '{self.variable}' needs positive endpoints")
        return self

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        """'var:start:stop:count[:log]'."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ValueError(f"Axis '{text}' is not of the form var:start:stop:count[:log]")
        scale = parts[4] if len(parts) == 5 else "linear"
        return cls(variable=parts[0], start=float(parts[1]), stop=float(parts[2]),
                   count=int(parts[3]), scale=scale)

    def values(self) -> List[float]:
        if self.scale == "log":
            return [float(x) for x in np.geomspace(self.start, self.stop, self.count)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]


class GridSpec(BaseModel):
    """A sweep over one or two axes with the remaining coordinates fixed."""
    target: GridTarget = Field(..., description="What to evaluate at each grid point")
    axes: List[AxisSpec] = Field(..., min_length=1, max_length=2, description="Swept axes, first is slowest")
    fixed: Dict[str, float] = Field(default_factory=dict, description="Fixed coordinates")
    out: Optional[str] = Field(None, description="Output path; stdout when unset")
    format: Literal["csv", "json"] = Field("csv", description="Output format")

    @field_validator("axes")
    @classmethod
    def validate_unique(cls, v: List[AxisSpec]) -> List[AxisSpec]:
        names = [a.variable for a in v]
        if len(set(names)) != len(names):
            raise ValueError("Axis variables must be distinct")
        return v

    @model_validator(mode="after")
    def validate_variables(self) -> "GridSpec":
        names = {a.variable for a in self.axes}
        allowed = set(_FIXED_DEFAULTS[self.target])
        unknown = (names | set(self.fixed)) - allowed
        if unknown:
            raise ValueError(f"Unknown coordinates for {self.target.value}: {', '.join(sorted(unknown))}")
        if not any(names <= family for family in _AXES[self.target]):
            families = " or ".join("/".join(sorted(f)) for f in _AXES[self.target])
            raise ValueError(f"Axes of {self.target.value} must be drawn from {families}")
        return self

    def points(self) -> List[Dict[str, float]]:
        """Coordinates of every grid point, in index order."""
        base = {**_FIXED_DEFAULTS[self.target], **self.fixed}
        out = []
        for combo in itertools.product(*(a.values() for a in self.axes)):
            coords = dict(base)
            coords.update({a.variable: x for a, x in zip(self.axes, combo)})
            out.append(coords)
        return out


# ============================================================
# Evaluation
# ============================================================

def _evaluate_point(spec: GridSpec, coords: Dict[str, float], tol: float) -> Tuple[complex, float]:
    if spec.target == GridTarget.KERNEL_J:
        res = kernel_from_lambda(int(coords["j"]), complex(coords["lambda_re"], coords["lambda_im"]), tol)
        return res.value, res.err_est

    if spec.target == GridTarget.GFUN:
        names = {a.variable for a in spec.axes}
        if names <= {"radius", "angle"}:
            zeta = coords["radius"] * cmath.exp(1j * coords["angle"])
        else:
            zeta = complex(coords["zeta_re"], coords["zeta_im"])
        res = g_boundary(zeta, tol)
        return res.value, res.err_est

    z = WormPoint(coords["r"] * cmath.exp(1j * coords["phi"]), complex(coords["z2_re"], coords["z2_im"]))
    w = WormPoint(complex(coords["w1_re"], coords["w1_im"]), complex(coords["w2_re"], coords["w2_im"]))
    # H = z1 conj(w1) z2 conj(w2) (ell(z) - conj ell(w))^2 K_W
    res = kernel_W(z, w, tol)
    d = worm_frame(z).ell - worm_frame(w).ell.conjugate()
    scale = z.z1 * w.z1.conjugate() * z.z2 * w.z2.conjugate() * d ** 2
    return scale * res.value, abs(scale) * res.err_est


async def evaluate_grid(spec: GridSpec, tol: float, max_workers: int = 4) -> List[Dict[str, object]]:
    """Rows of {axis values..., value, err_est} in index order."""
    points = spec.points()
    semaphore = asyncio.Semaphore(max_workers)
    logger.info(f"[GRID] {spec.target.value}: {len(points)} points, {max_workers} workers")

    async def run_one(coords: Dict[str, float]):
        async with semaphore:
            return await asyncio.to_thread(_evaluate_point, spec, coords, tol)

    results = await asyncio.gather(*(run_one(c) for c in points))
    rows = []
    for coords, (value, err) in zip(points, results):
        row: Dict[str, object] = {a.variable: coords[a.variable] for a in spec.axes}
        row["value"] = complex(value)
        row["err_est"] = err
        rows.append(row)
    return rows
