"""
Subcommand handlers.

Each handler takes the parsed arguments and returns an Output: a JSON
payload plus the CSV header and rows for the same data.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from core.errors import DomainError
from core.settings import get_settings
from geometry.worm import Domain, UPoint, WormPoint, frame as worm_frame
from kernels.base import Representation, Separation
from kernels.halfplane import kernel_from_lambda
from kernels.worm import g_boundary, g_probe_circle, kernel_U, kernel_W
from numerics.specfun import alpha_hat
from numerics.weights import alpha, omega
from storage.serialization import split_complex
from utils.template import render_report
from verification.probes import (
    NORM_BUDGET,
    ProbeKind,
    decay_estimate,
    divergence_probe,
    sample_norm,
)
from verification.runner import SuiteRunner
from .grid import AxisSpec, GridSpec, evaluate_grid


logger = logging.getLogger(__name__)


@dataclass
class Output:
    """What a handler produced; text overrides both JSON and CSV."""
    payload: Dict[str, Any]
    header: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)
    text: Optional[str] = None
    exit_code: int = 0
    default_format: Optional[str] = None


# ============================================================
# Argument parsing helpers
# ============================================================

def parse_complex(text: str) -> complex:
    """'re,im' or a single real number."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise DomainError(f"'{text}' is not a complex number 're,im'")


def parse_point(text: str) -> tuple:
    """'re1,im1,re2,im2' -> (c1, c2)."""
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise DomainError(f"'{text}' is not a point 're1,im1,re2,im2'")
    return complex(parts[0], parts[1]), complex(parts[2], parts[3])


def parse_ladder(text: str) -> List[float]:
    """
    'a:b[:decades]' -> a, a 10^-d, ... down to b (d = 1 by default),
    or an explicit comma-separated list.
    """
    if ":" not in text:
        return [float(x) for x in text.split(",")]
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise DomainError(f"'{text}' is not a ladder 'start:stop[:decades]'")
    start, stop = float(parts[0]), float(parts[1])
    step = float(parts[2]) if len(parts) == 3 else 1.0
    if not (start > stop > 0 and step > 0):
        raise DomainError("A ladder needs start > stop > 0 and a positive step")
    lo, hi = math.log10(start), math.log10(stop)
    count = int(round((lo - hi) / step)) + 1
    return [10.0 ** (lo - i * step) for i in range(count)]


def parse_mu(text: Optional[str]) -> Optional[float]:
    if text is None or text.lower() in ("inf", "infinity", "none"):
        return None
    return float(text)


def _tol(args, default: Optional[float] = None) -> float:
    if args.tol is not None:
        return args.tol
    return default if default is not None else get_settings().default_tol


def _value_rows(value: complex, err: float) -> List[List[Any]]:
    return [split_complex([value]) + [err]]


_VALUE_HEADER = ["value_re", "value_im", "err_est"]


def _kernel_output(op: str, inputs: Dict[str, Any], result) -> Output:
    record = result.to_dict()
    payload = {
        "op": op,
        "inputs": inputs,
        "value": record["value"],
        "err_est": record["err_est"],
        "diagnostics": {"representation": record["representation"], **record["diagnostics"]},
    }
    return Output(payload, _VALUE_HEADER, _value_rows(result.value, result.err_est))


# ============================================================
# Kernel evaluation
# ============================================================

def cmd_eval_j(args) -> Output:
    tol = _tol(args)
    rep = Representation(args.rep) if args.rep else None
    if args.lam is not None:
        sep = Separation(parse_complex(args.lam))
        inputs = {"j": args.j, "lambda": sep.lam}
    else:
        if args.z is None or args.w is None:
            raise DomainError("eval-j needs --z and --w, or --lambda")
        z, w = parse_complex(args.z), parse_complex(args.w)
        sep = Separation.from_points(z, w)
        inputs = {"j": args.j, "z": z, "w": w}
    inputs.update({"representation": args.rep or "auto", "tol": tol})
    result = kernel_from_lambda(args.j, sep, tol, rep, order=args.order)
    return _kernel_output("eval-j", inputs, result)


def _scale_normalized(domain: Domain, z, w, result) -> tuple:
    """(value, err) of G or H from a kernel result."""
    if domain == Domain.U:
        scale = z.w2 * w.w2.conjugate() * (z.w1 - w.w1.conjugate()) ** 2
    else:
        d = worm_frame(z).ell - worm_frame(w).ell.conjugate()
        scale = z.z1 * w.z1.conjugate() * z.z2 * w.z2.conjugate() * d ** 2
    return scale * result.value, abs(scale) * result.err_est


def cmd_eval_u(args) -> Output:
    tol = _tol(args)
    z, w = UPoint(*parse_point(args.z)), UPoint(*parse_point(args.w))
    result = kernel_U(z, w, tol, window=args.window)
    inputs = {"z": list(z.as_tuple()), "w": list(w.as_tuple()), "tol": tol, "window": args.window}
    out = _kernel_output("eval-u", inputs, result)
    if args.normalized:
        value, err = _scale_normalized(Domain.U, z, w, result)
        out.payload.update({"op": "eval-u-normalized", "value": value, "err_est": err})
        out.rows = _value_rows(value, err)
    return out


def cmd_eval_w(args) -> Output:
    tol = _tol(args)
    z, w = WormPoint(*parse_point(args.z)), WormPoint(*parse_point(args.w))
    result = kernel_W(z, w, tol, frame=args.frame, window=args.window)
    inputs = {"z": list(z.as_tuple()), "w": list(w.as_tuple()), "tol": tol,
              "frame": args.frame, "window": args.window}
    out = _kernel_output("eval-w", inputs, result)
    if args.normalized:
        value, err = _scale_normalized(Domain.W, z, w, result)
        out.payload.update({"op": "eval-w-normalized", "value": value, "err_est": err})
        out.rows = _value_rows(value, err)
    return out


def cmd_weight(args) -> Output:
    payload: Dict[str, Any] = {"op": "weight", "inputs": {"j": args.j}}
    header: List[str] = []
    row: List[Any] = []
    if args.v is not None:
        value = float(alpha(args.j, args.v))
        payload["inputs"]["v"] = args.v
        payload["alpha"] = value
        header.append("alpha")
        row.append(value)
    if args.w1 is not None:
        w1 = parse_complex(args.w1)
        value = complex(omega(args.j, w1))
        payload["inputs"]["w1"] = w1
        payload["omega"] = value
        header.extend(["omega_re", "omega_im"])
        row.extend(split_complex([value]))
    if args.xi is not None:
        symbol = alpha_hat(args.j, args.xi)
        payload["inputs"]["xi"] = args.xi
        payload["alpha_hat"] = symbol.value
        payload["beta"] = symbol.beta
        header.extend(["alpha_hat", "beta"])
        row.extend([symbol.value, symbol.beta])
    if not header:
        raise DomainError("weight needs at least one of --v, --w1, --xi")
    return Output(payload, header, [row])


def cmd_gfun(args) -> Output:
    tol = _tol(args, 1e-10)
    if args.circle is not None:
        samples = g_probe_circle(args.circle, args.count, tol)
        payload = {
            "op": "gfun-circle",
            "inputs": {"radius": args.circle, "count": args.count, "tol": tol},
            "samples": [{"angle": a, "value": v, "abs": abs(v)} for a, v in samples],
        }
        rows = [[a, *split_complex([v]), abs(v)] for a, v in samples]
        return Output(payload, ["angle", "value_re", "value_im", "abs"], rows)
    if args.zeta is None:
        raise DomainError("gfun needs --zeta or --circle")
    zeta = parse_complex(args.zeta)
    result = g_boundary(zeta, tol, route=args.route)
    return _kernel_output("gfun", {"zeta": zeta, "route": args.route, "tol": tol}, result)


# ============================================================
# Grid
# ============================================================

def cmd_grid(args) -> Output:
    fixed: Dict[str, float] = {}
    for item in args.fixed or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--fixed expects name=value, got '{item}'")
        fixed[key.strip()] = float(value)
    spec = GridSpec(
        target=args.target,
        axes=[AxisSpec.parse(a) for a in args.axis],
        fixed=fixed,
        out=args.out,
        format=args.format or "csv",
    )
    tol = _tol(args, 1e-8)
    workers = args.workers or get_settings().max_workers
    rows = asyncio.run(evaluate_grid(spec, tol, workers))

    names = [a.variable for a in spec.axes]
    payload = {
        "op": "grid",
        "inputs": {"target": spec.target.value, "axes": [a.model_dump() for a in spec.axes],
                   "fixed": fixed, "tol": tol},
        "rows": rows,
    }
    csv_rows = [[r[n] for n in names] + split_complex([r["value"]]) + [r["err_est"]] for r in rows]
    return Output(payload, names + _VALUE_HEADER, csv_rows, default_format=spec.format)


# ============================================================
# Probes
# ============================================================

def _probe_output(op: str, inputs: Dict[str, Any], result) -> Output:
    payload = {"op": op, "inputs": inputs, **result.to_dict()}
    rows = [[d, p, i] for d, p, i in zip(result.deltas, result.partials, result.increments)]
    return Output(payload, ["delta", "partial", "increment"], rows)


def cmd_probe_lp(args) -> Output:
    w = WormPoint(*parse_point(args.w))
    ladder = parse_ladder(args.ladder) if args.ladder else None
    kind = ProbeKind.L2 if args.probe == "l2" else ProbeKind.LP
    result = divergence_probe(kind, w, ladder, p=args.p, mu=args.mu, eps=args.eps, t=args.t,
                              tol=_tol(args, 1e-10))
    inputs = {"p": result.parameter, "w": list(w.as_tuple()), "mu": args.mu, "eps": args.eps, "t": args.t}
    return _probe_output(f"probe-{kind.value}", inputs, result)


def cmd_probe_sobolev(args) -> Output:
    w = WormPoint(*parse_point(args.w))
    ladder = parse_ladder(args.ladder) if args.ladder else None
    result = divergence_probe(ProbeKind.SOBOLEV, w, ladder, s=args.s, mu=args.mu, eps=args.eps, t=args.t,
                              tol=_tol(args, 1e-10))
    inputs = {"s": args.s, "w": list(w.as_tuple()), "mu": args.mu, "eps": args.eps, "t": args.t}
    return _probe_output("probe-sobolev", inputs, result)


def cmd_probe_norm(args) -> Output:
    eta = parse_complex(args.eta)
    mu = parse_mu(args.mu)
    tol = _tol(args, 1e-8)
    budget = args.budget or NORM_BUDGET
    result = sample_norm(eta, args.c, args.j, args.m, mu, tol, budget=budget)
    inputs = {"eta": eta, "c": args.c, "j": args.j, "m": args.m,
              "mu": "inf" if mu is None else mu, "tol": tol, "budget": budget}
    payload = {"op": "probe-norm", "inputs": inputs, **result.to_dict()}
    rows = [[level, p, i] for level, (p, i) in enumerate(zip(result.partials, result.increments))]
    return Output(payload, ["level", "partial", "increment"], rows)


def cmd_probe_decay(args) -> Output:
    tol = _tol(args, 1e-8)
    if args.lam is not None:
        lam = parse_complex(args.lam)
        z, w = complex(-lam.imag, lam.real / 2.0), complex(0.0, lam.real / 2.0)
    else:
        if args.z is None or args.w is None:
            raise DomainError("probe decay needs --z and --w, or --lambda")
        z, w = parse_complex(args.z), parse_complex(args.w)
    fit = decay_estimate(z, w, args.j_max, tol, k_min=args.k_min)
    payload = {"op": "probe-decay", "inputs": {"z": z, "w": w, "j_max": args.j_max, "k_min": args.k_min},
               **fit.to_dict()}
    n = min(len(fit.ks), len(fit.log_abs_plus), len(fit.log_abs_minus))
    rows = [[fit.ks[i], fit.log_abs_plus[i], fit.log_abs_minus[i]] for i in range(n)]
    return Output(payload, ["k", "log_abs_plus", "log_abs_minus"], rows)


# ============================================================
# Verification suite
# ============================================================

def cmd_verify(args) -> Output:
    ids: Optional[Sequence[str]] = args.check or None
    selected = SuiteRunner.select(args.suite, ids)
    runner = SuiteRunner(max_workers=args.workers, seed=args.seed)
    configs: Dict[str, Dict[str, Any]] = {}
    if args.budget is not None:
        configs["C10"] = {"budget": args.budget}
    suite = runner.run(selected, configs)

    data = suite.to_dict()
    rows = [[r.check_id, r.title, str(r.success).lower(), r.detail] for r in suite.results]
    text = render_report(data) if (args.format or "text") == "text" else None
    return Output(
        payload={"op": "verify", **data},
        header=["check_id", "title", "success", "detail"],
        rows=rows,
        text=text,
        exit_code=0 if suite.success else 1,
    )
