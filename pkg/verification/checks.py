"""
Acceptance checks.

One class per criterion. Each run() returns a CheckOutcome with the measured
worst-case quantity in its data; thresholds can be overridden through the
check config.
"""

from __future__ import annotations

import cmath
import math
from typing import Any, Dict, List

import numpy as np

from core.errors import InconclusiveError
from geometry.worm import (
    WormPoint,
    map_phi,
    map_phi_inv,
    sample_u_points,
    sample_worm_points,
)
from kernels.base import Representation, Separation
from kernels.halfplane import (
    b_lambda,
    f_j,
    i_moment,
    kernel_from_lambda,
    psi_n,
)
from kernels.worm import g_boundary, kernel_U, kernel_W
from numerics.specfun import alpha_hat, alpha_hat_oracle
from .base import BaseCheck, CheckOutcome
from .probes import (
    ProbeKind,
    decay_estimate,
    divergence_probe,
    reproducing_error,
    sample_norm,
)
from .samples import RationalSample


_PI3 = math.pi ** 3


def _rel(a: complex, b: complex) -> float:
    scale = abs(b)
    return abs(a - b) / scale if scale > 0 else abs(a - b)


def _rng(context: Dict[str, Any]) -> np.random.Generator:
    return np.random.default_rng(int(context.get("seed", 0)))


def _lambda_points(lam: complex):
    """An interior pair (z, w) with -i(z - conj w) = lam."""
    lam = complex(lam)
    return complex(-lam.imag, lam.real / 2.0), complex(0.0, lam.real / 2.0)


# ============================================================
# Special functions and half-plane kernels
# ============================================================

class SpectralSymbolCheck(BaseCheck):
    title = "alpha_hat vs quadrature oracle"
    criterion = 1

    def run(self, context):
        limit = self.get_config_value("limit", 1e-9)
        worst = 0.0
        for j in (-3, -1, 0, 2, 5):
            for xi in (0.25, 0.5, 1.0, 2.0, 8.0, 32.0):
                worst = max(worst, _rel(alpha_hat(j, xi).value, alpha_hat_oracle(j, xi)))
        exact = abs(alpha_hat(-1, 0.5).value - 2.0 * math.pi)
        return CheckOutcome(
            passed=worst < limit and exact < 1e-10,
            detail=f"max rel err {worst:.2e}, |alpha_hat_-1(0.5) - 2pi| = {exact:.2e}",
            data={"max_rel_err": worst, "exact_err": exact},
        )


class Psi2ClosedFormCheck(BaseCheck):
    title = "psi_2 closed form"
    criterion = 2

    def run(self, context):
        limit = self.get_config_value("limit", 1e-8)
        worst = 0.0
        for xi in (0.0, 0.5, 1.0, 2.0, 4.0):
            quad = -i_moment(0, xi, tol=1e-13) / (2.0 * _PI3)
            worst = max(worst, _rel(quad, psi_n(2, xi)))
        at_zero = abs(psi_n(2, 0.0) + 1.0 / _PI3)
        return CheckOutcome(
            passed=worst < limit and at_zero < 1e-15,
            detail=f"max rel err {worst:.2e}",
            data={"max_rel_err": worst},
        )


class RepresentationAgreementCheck(BaseCheck):
    title = "integral vs Fourier representation"
    criterion = 3

    def run(self, context):
        limit = self.get_config_value("limit", 1e-6)
        worst = 0.0
        where = None
        for re in (0.2, 0.5, 1.0, 2.0, 5.0):
            for im in (0.0, 1.0, 5.0):
                sep = Separation(complex(re, im))
                for j in range(-4, 4):
                    a = kernel_from_lambda(j, sep, 1e-10, Representation.INTEGRAL).value
                    b = kernel_from_lambda(j, sep, 1e-10, Representation.FOURIER).value
                    err = _rel(a, b)
                    if err > worst:
                        worst, where = err, (re, im, j)
        return CheckOutcome(
            passed=worst < limit,
            detail=f"max rel diff {worst:.2e} at (Re, Im, j) = {where}",
            data={"max_rel_diff": worst, "worst_case": where},
        )


class AsymptoticOrderCheck(BaseCheck):
    title = "asymptotic expansion order"
    criterion = 4

    def run(self, context):
        radii = (10.0, 20.0, 50.0, 100.0)
        slopes: Dict[str, float] = {}
        passed = True
        for j in (-1, 0):
            exact = [kernel_from_lambda(j, r, 1e-13, Representation.INTEGRAL).value for r in radii]
            for N in (3, 4):
                errs = [abs(kernel_from_lambda(j, r, representation=Representation.ASYMPTOTIC, order=N).value - e)
                        for r, e in zip(radii, exact)]
                slope = float(np.polyfit(np.log(radii), np.log(errs), 1)[0])
                slopes[f"j={j},N={N}"] = slope
                passed &= abs(slope + N) <= 0.3
        return CheckOutcome(
            passed=passed,
            detail=", ".join(f"{k}: {v:.3f}" for k, v in slopes.items()),
            data={"slopes": slopes},
        )


class LargeLambdaCheck(BaseCheck):
    title = "large-lambda limit of f_j"
    criterion = 5

    def run(self, context):
        limits = {-1: -1.0 / _PI3, 0: -(0.5 * math.pi / math.sinh(0.5 * math.pi)) / _PI3}
        far = {j: _rel(f_j(j, 1e4, 1e-12), target) for j, target in limits.items()}
        near = {}
        for j in limits:
            expansion = -(100.0 ** 2) * kernel_from_lambda(
                j, 100.0, representation=Representation.ASYMPTOTIC, order=5).value
            near[j] = _rel(f_j(j, 100.0, 1e-12), expansion)
        passed = all(v < 1e-3 for v in far.values()) and all(v < 1e-4 for v in near.values())
        return CheckOutcome(
            passed=passed,
            detail=(f"lambda=1e4 rel err to limit {max(far.values()):.2e}; "
                    f"lambda=100 rel err to N=5 expansion {max(near.values()):.2e}"),
            data={"limit_err": far, "expansion_err": near},
        )


class SmallLambdaCheck(BaseCheck):
    title = "small-lambda boundedness of sqrt(lambda) f_-1"
    criterion = 6

    def run(self, context):
        ladder = (1e-2, 1e-3, 1e-4, 1e-5)
        values = [math.sqrt(lam) * f_j(-1, lam, 1e-10).real for lam in ladder]
        negative = all(v < 0 for v in values)
        mags = [abs(v) for v in values]
        span = max(mags) / min(mags) if min(mags) > 0 else math.inf
        return CheckOutcome(
            passed=negative and span < 10.0,
            detail=f"values {', '.join(f'{v:.4g}' for v in values)}; span x{span:.3g}",
            data={"lambdas": list(ladder), "values": values, "span": span},
        )


class DecayRateCheck(BaseCheck):
    title = "exponential decay in j"
    criterion = 7

    def run(self, context):
        k_point = self.get_config_value("pointwise_k", 200)
        passed = True
        rows = []
        for lam in (0.5 + 0j, 1.0 + 1.0j):
            z, w = _lambda_points(lam)
            fit = decay_estimate(z, w, j_max=60, tol=1e-8, k_min=20)
            b = fit.b_lambda
            root = abs(kernel_from_lambda(k_point - 1, lam, 1e-8).value) ** (1.0 / k_point)
            ok = fit.rate_plus <= -0.9 * b and fit.rate_minus <= -0.9 * b and root <= math.exp(-0.9 * b)
            passed &= ok
            rows.append({"lambda": lam, "b_lambda": b, "rate_plus": fit.rate_plus,
                         "rate_minus": fit.rate_minus, "root": root})
        return CheckOutcome(
            passed=passed,
            detail="; ".join(f"lambda={r['lambda']}: rate {r['rate_plus']:.3f} vs -0.9b={-0.9 * r['b_lambda']:.3f}"
                             for r in rows),
            data={"fits": rows},
        )


# ============================================================
# Kernels of U and W
# ============================================================

class SeriesTruncationCheck(BaseCheck):
    title = "K_U window doubling and symmetries"
    criterion = 8

    def run(self, context):
        tol = self.get_config_value("tol", 1e-8)
        n = self.get_config_value("pairs", 20)
        rng = _rng(context)
        zs = sample_u_points(rng, n, v_range=(0.5, 2.0), margin=0.5)
        ws = sample_u_points(rng, n, v_range=(0.5, 2.0), margin=0.5)
        phases = rng.uniform(-math.pi, math.pi, n)

        worst_window = worst_herm = worst_rot = 0.0
        for z, w, phase in zip(zs, ws, phases):
            base = kernel_U(z, w, tol)
            window = max(-base.series.j_min - 1, base.series.j_max + 1)
            doubled = kernel_U(z, w, tol, window=2 * window).value
            worst_window = max(worst_window, _rel(doubled, base.value))

            swapped = kernel_U(w, z, tol).value
            worst_herm = max(worst_herm, _rel(swapped.conjugate(), base.value))

            rot = cmath.exp(1j * phase)
            rotated = kernel_U((z.w1, z.w2 * rot), (w.w1, w.w2 * rot), tol).value
            worst_rot = max(worst_rot, _rel(rotated, base.value))

        passed = worst_window < tol and worst_herm < 1e-9 and worst_rot < 1e-10
        return CheckOutcome(
            passed=passed,
            detail=f"window {worst_window:.2e}, hermitian {worst_herm:.2e}, rotation {worst_rot:.2e}",
            data={"window": worst_window, "hermitian": worst_herm, "rotation": worst_rot},
        )


class TransformationLawCheck(BaseCheck):
    title = "K_W z1 conj(w1) = K_U(Phi z, Phi w)"
    criterion = 9

    def run(self, context):
        tol = self.get_config_value("tol", 1e-8)
        n = self.get_config_value("pairs", 20)
        n_trip = self.get_config_value("round_trips", 10_000)
        rng = _rng(context)

        zs = sample_worm_points(rng, n, margin=0.5)
        ws = sample_worm_points(rng, n, margin=0.5)
        worst_law = 0.0
        passed = True
        for z, w in zip(zs, ws):
            kw = kernel_W(z, w, tol)
            ku = kernel_U(map_phi(z), map_phi(w), tol)
            lhs = kw.value * z.z1 * w.z1.conjugate()
            allowed = kw.err_est * abs(z.z1 * w.z1) + ku.err_est + tol * abs(ku.value)
            diff = abs(lhs - ku.value)
            worst_law = max(worst_law, _rel(lhs, ku.value))
            passed &= diff <= allowed

        worst_trip = 0.0
        for p in sample_worm_points(rng, n_trip):
            q = map_phi_inv(map_phi(p))
            worst_trip = max(worst_trip, abs(q.z1 - p.z1), abs(q.z2 - p.z2))
        for u in sample_u_points(rng, n_trip):
            q = map_phi(map_phi_inv(u))
            worst_trip = max(worst_trip, abs(q.w1 - u.w1), abs(q.w2 - u.w2))
        passed &= worst_trip < 1e-12

        return CheckOutcome(
            passed=passed,
            detail=f"max rel diff {worst_law:.2e}, round trip {worst_trip:.2e}",
            data={"transformation_rel_diff": worst_law, "round_trip": worst_trip},
        )


class ReproducingPropertyCheck(BaseCheck):
    title = "reproducing property of K_j"
    criterion = 10

    CASES = (
        (-1, RationalSample(a=1.0, b=2), 1j),
        (0, RationalSample(a=2.0, b=3), 0.5 + 1j),
        (1, RationalSample(a=1.0, b=2), 2j),
    )

    def run(self, context):
        limit = self.get_config_value("limit", 1e-3)
        budget = self.get_config_value("budget", 4_000_000)
        errors = []
        for j, f, w in self.CASES:
            errors.append(reproducing_error(j, f, w, budget=budget).error)
        return CheckOutcome(
            passed=all(e < limit for e in errors),
            detail="errors " + ", ".join(f"{e:.2e}" for e in errors),
            data={"errors": errors},
        )


class BoundaryProfileCheck(BaseCheck):
    title = "boundary profile g: series vs pole split"
    criterion = 11

    def run(self, context):
        worst_route = worst_sym = 0.0
        for zeta in (0.9, 1.0, 1.3, cmath.exp(0.4 + 0.7j)):
            series = g_boundary(zeta, 1e-12, route="series").value
            split = g_boundary(zeta, 1e-12, route="split").value
            worst_route = max(worst_route, _rel(series, split))
            worst_sym = max(worst_sym, _rel(g_boundary(1.0 / zeta, 1e-12).value, g_boundary(zeta, 1e-12).value))
        return CheckOutcome(
            passed=worst_route < 1e-8 and worst_sym < 1e-10,
            detail=f"routes {worst_route:.2e}, g(1/zeta) symmetry {worst_sym:.2e}",
            data={"route_diff": worst_route, "symmetry": worst_sym},
        )


# ============================================================
# Function-space statements
# ============================================================

class NormClassificationCheck(BaseCheck):
    title = "norm classification truth table"
    criterion = 12

    C = 1.0
    J = 0
    # (eta, m, mu, expected); mu None is all of W
    CASES = (
        (-0.5 + 0j, 0.0, 1.0, "finite"),
        (-0.5 + 0j, 3.0, 1.0, "finite"),
        (-1.0 + 0j, 2.0, 1.0, "finite"),
        (-1.0 + 0j, 1.0, 1.0, "finite"),
        (-1.0 + 0.5j, 2.0, None, "finite"),
        (-0.5 + 0.5j, 0.75, None, "finite"),
        (-1.2 + 0j, 0.0, 1.0, "divergent"),
        (-1.0 + 0j, 0.5, 1.0, "divergent"),
        (-1.0 + 0j, 0.0, 1.0, "divergent"),
        (-0.5 + 0j, 0.75, None, "divergent"),
    )

    def run(self, context):
        tol = self.get_config_value("tol", 1e-6)
        rows: List[Dict[str, Any]] = []
        for eta, m, mu, expected in self.CASES:
            try:
                got = sample_norm(eta, self.C, self.J, m, mu, tol).classification
            except InconclusiveError as e:
                self.log_error(f"Inconclusive for eta={eta}, m={m}, mu={mu}: {e}")
                got = "inconclusive"
            rows.append({"eta": eta, "m": m, "mu": mu, "expected": expected, "got": got})
        misses = [r for r in rows if r["got"] != r["expected"]]
        return CheckOutcome(
            passed=not misses,
            detail=f"{len(rows) - len(misses)}/{len(rows)} cases match",
            data={"cases": rows},
        )


class IrregularityProbeCheck(BaseCheck):
    title = "Lp and Sobolev divergence probes"
    criterion = 13

    def run(self, context):
        w = WormPoint(1.0, 1.0)
        lp = divergence_probe(ProbeKind.LP, w, p=4.0)
        l2 = divergence_probe(ProbeKind.L2, w)
        sob = divergence_probe(ProbeKind.SOBOLEV, w, s=0.25)

        lp_monotone = all(b > a for a, b in zip(lp.partials[:-1], lp.partials[1:]))
        expected = lp.parameter - 2.0
        lp_rate = all(expected / 3.0 <= e <= 3.0 * expected for e in lp.growth_exponents[-2:])
        l2_tail = l2.partials[-1] / l2.partials[-3] - 1.0
        i4, i8 = l2.deltas.index(1e-4), l2.deltas.index(1e-8)
        l2_mid = l2.partials[i8] / l2.partials[i4] - 1.0

        passed = (lp.growth > 10 and lp_monotone and lp_rate
                  and l2_tail < 0.05 and l2_mid < 0.05 and sob.growth > 10)
        return CheckOutcome(
            passed=passed,
            detail=(f"Lp(4) x{lp.growth:.3g}, L2 tail {l2_tail:.2%}, "
                    f"L2 1e-4..1e-8 {l2_mid:.2%}, Sobolev(0.25) x{sob.growth:.3g}"),
            data={"lp": lp.to_dict(), "l2": l2.to_dict(), "sobolev": sob.to_dict()},
        )


class GramPositivityCheck(BaseCheck):
    title = "Gram matrix positivity of K_W"
    criterion = 14

    def run(self, context):
        tol = self.get_config_value("tol", 1e-9)
        n = self.get_config_value("points", 6)
        rng = _rng(context)
        angles = rng.uniform(-math.pi, math.pi, n)
        points = [WormPoint(1.0 + 0.4 * cmath.exp(1j * a), 1.0) for a in angles]

        gram = np.empty((n, n), dtype=complex)
        for a, p in enumerate(points):
            for b, q in enumerate(points):
                gram[a, b] = kernel_W(p, q, tol).value
        hermitian = 0.5 * (gram + gram.conj().T)
        smallest = float(np.linalg.eigvalsh(hermitian)[0])
        trace = float(np.trace(hermitian).real)
        return CheckOutcome(
            passed=smallest >= -1e-9 * trace,
            detail=f"min eigenvalue {smallest:.3e}, trace {trace:.3e}",
            data={"min_eigenvalue": smallest, "trace": trace},
        )
