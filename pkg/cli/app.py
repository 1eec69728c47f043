"""
Command-line entry point for worm-bergman.

Subcommands: eval-j, eval-u, eval-w, weight, grid, gfun,
probe {lp|l2|sobolev|norm|decay}, verify.

Exit codes:
- 0  success
- 1  verify ran but at least one check failed
- 2  usage or domain error
- 3  convergence error
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from core.errors import ConvergenceError, DomainError
from core.settings import get_settings
from storage.serialization import to_json, write_csv, write_output
from . import commands


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3


# ---------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------
def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--tol", type=float, default=None, help="Relative tolerance")
    shared.add_argument("--format", choices=["json", "csv", "text"], default=None, help="Output format")
    shared.add_argument("--out", default=None, help="Write output to PATH instead of stdout")
    shared.add_argument("--seed", type=int, default=None, help="Seed for stochastic modes")
    shared.add_argument("--log-level", default=None, help="Logging level on stderr")
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="worm-bergman",
        description="Bergman kernels of the worm domain, its unwound model and the half-plane components.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-j", parents=[shared], help="Half-plane kernel K_j")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--z", help="re,im")
    p.add_argument("--w", help="re,im")
    p.add_argument("--lambda", dest="lam", help="Separation re,im instead of --z/--w")
    p.add_argument("--rep", choices=["integral", "fourier", "asymptotic"], default=None)
    p.add_argument("--order", type=int, default=4, help="Expansion order N for --rep asymptotic")
    p.set_defaults(handler=commands.cmd_eval_j)

    for name, handler, help_text in (
        ("eval-u", commands.cmd_eval_u, "Kernel of the unwound domain U"),
        ("eval-w", commands.cmd_eval_w, "Kernel of the worm domain W"),
    ):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        p.add_argument("--z", required=True, help="re1,im1,re2,im2")
        p.add_argument("--w", required=True, help="re1,im1,re2,im2")
        p.add_argument("--window", type=int, default=None, help="Sum exactly |j+1| <= WINDOW")
        p.add_argument("--normalized", action="store_true", help="Emit G (on U) or H (on W)")
        if name == "eval-w":
            p.add_argument("--frame", choices=["general", "principal"], default="general")
        p.set_defaults(handler=handler)

    p = sub.add_parser("weight", parents=[shared], help="alpha_j, omega_j and alpha_hat_j")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--w1", default=None, help="re,im")
    p.add_argument("--xi", type=float, default=None)
    p.set_defaults(handler=commands.cmd_weight)

    p = sub.add_parser("grid", parents=[shared], help="Sweep a kernel over a grid")
    p.add_argument("--target", choices=["kernel-j", "gfun", "worm-h"], required=True)
    p.add_argument("--axis", action="append", required=True, help="var:start:stop:count[:log]")
    p.add_argument("--fixed", action="append", default=[], help="name=value")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=commands.cmd_grid)

    p = sub.add_parser("gfun", parents=[shared], help="Boundary profile g")
    p.add_argument("--zeta", default=None, help="re,im")
    p.add_argument("--route", choices=["auto", "series", "split"], default="auto")
    p.add_argument("--circle", type=float, default=None, help="Sample g on the circle of this radius")
    p.add_argument("--count", type=int, default=64)
    p.set_defaults(handler=commands.cmd_gfun)

    probe = sub.add_parser("probe", help="Function-space probes")
    probes = probe.add_subparsers(dest="probe", required=True)
    for name in ("lp", "l2", "sobolev"):
        p = probes.add_parser(name, parents=[shared])
        p.add_argument("--w", required=True, help="re1,im1,re2,im2")
        p.add_argument("--ladder", default=None, help="start:stop[:decades] or a comma list")
        p.add_argument("--mu", type=float, default=1.0)
        p.add_argument("--eps", type=float, default=0.5)
        p.add_argument("--t", type=float, default=0.0)
        if name == "sobolev":
            p.add_argument("--s", type=float, default=0.25)
            p.set_defaults(handler=commands.cmd_probe_sobolev)
        else:
            p.add_argument("--p", type=float, default=4.0)
            p.set_defaults(handler=commands.cmd_probe_lp)

    p = probes.add_parser("norm", parents=[shared])
    p.add_argument("--eta", required=True, help="re,im")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--mu", default="1", help="Positive real or 'inf'")
    p.add_argument("--budget", type=int, default=None, help="2-D quadrature node budget per region")
    p.set_defaults(handler=commands.cmd_probe_norm)

    p = probes.add_parser("decay", parents=[shared])
    p.add_argument("--z", default=None, help="re,im")
    p.add_argument("--w", default=None, help="re,im")
    p.add_argument("--lambda", dest="lam", default=None, help="re,im")
    p.add_argument("--j-max", dest="j_max", type=int, default=60)
    p.add_argument("--k-min", dest="k_min", type=int, default=None)
    p.set_defaults(handler=commands.cmd_probe_decay)

    p = sub.add_parser("verify", parents=[shared], help="Run the acceptance checks")
    p.add_argument("--suite", choices=["all", "fast", "slow"], default="all")
    p.add_argument("--check", action="append", default=[], help="Restrict to this check id")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="2-D quadrature node budget for C10")
    p.set_defaults(handler=commands.cmd_verify)

    return parser


# ---------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------
def _emit(args, output: commands.Output) -> None:
    fmt = args.format or output.default_format or ("text" if output.text is not None else "json")
    if fmt == "text" and output.text is not None:
        text = output.text
    elif fmt == "csv":
        text = write_csv(output.header, output.rows)
    else:
        payload = dict(output.payload)
        if args.seed is not None and "seed" not in payload:
            payload["seed"] = args.seed
        text = to_json(payload) + "\n"
    write_output(text, args.out, sys.stdout)


# ---------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------
def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_DOMAIN

    settings = get_settings()
    if args.seed is None and args.command == "verify":
        args.seed = settings.seed
    logging.basicConfig(
        level=(getattr(args, "log_level", None) or settings.log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        output = args.handler(args)
    except (DomainError, ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as e:
        print(f"convergence error: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE

    _emit(args, output)
    return output.exit_code
