"""
Command-line interface.

Exit codes: 0 success, 1 usage error, 2 a verification failed, 3 a capacity
limit was hit.  Exact values are printed as ``p/q`` next to a decimal.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .chaos import tetilla_moment_algorithm, wigner_moment
from .errors import CapacityError, TetillaError
from .identities import SUITES, report_records, run_suite
from .kernels import Kernel, reference_tetilla_kernel
from .rmt import SimConfig, alternative_representation_moments, semicircle_trace_moments, tetilla_trace_moments
from .theorem import builtin_families, get_family, sweep
from .transforms import (TETILLA_EDGE, density_from_cauchy, moments_from_cumulants, tetilla_cumulants,
                         tetilla_density, tetilla_moment_closed)

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_CAPACITY = 0, 1, 2, 3
STIELTJES_TOL = 1e-4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_exact(x) -> str:
    return str(x) if isinstance(x, (Fraction, int)) else repr(float(x))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _moments(args) -> tuple[str, int]:
    top = args.max_order
    if top < 2 or top % 2:
        raise UsageError("--max-order must be an even integer >= 2")
    m = top // 2
    if args.source == "closed":
        values = {2 * k: tetilla_moment_closed(k) for k in range(1, m + 1)}
    elif args.source == "algorithm":
        values = tetilla_moment_algorithm(m).moments
    elif args.source == "nc":
        seq = moments_from_cumulants(tetilla_cumulants(top), top, method="enumerate")
        values = {2 * k: seq[2 * k - 1] for k in range(1, m + 1)}
    else:
        if args.kernel is None:
            f = reference_tetilla_kernel()
        else:
            with open(args.kernel) as fh:
                f = Kernel.from_json(fh.read())
        values = {2 * k: wigner_moment(f, 2 * k) for k in range(1, m + 1)}
    lines = ["order, exact, decimal"]
    lines += [f"{k}, {_fmt_exact(v)}, {float(v)!r}" for k, v in sorted(values.items())]
    return "\n".join(lines) + "\n", EXIT_OK


def _density(args) -> tuple[str, int]:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    ts = np.linspace(-TETILLA_EDGE, TETILLA_EDGE, args.points)
    lines = ["t,h,h_stieltjes,delta"]
    worst = 0.0
    for t in map(float, ts):
        h = tetilla_density(t)
        if args.compare_stieltjes:
            hs = density_from_cauchy(t, args.eps)
            worst = max(worst, abs(hs - h))
            lines.append(f"{t!r},{h!r},{hs!r},{abs(hs - h)!r}")
        else:
            lines.append(f"{t!r},{h!r},,")
    code = EXIT_FAILED if worst > STIELTJES_TOL else EXIT_OK
    return "\n".join(lines) + "\n", code


def _verify(args) -> tuple[str, int]:
    results = run_suite(args.suite, args.q, args.grid, args.seed, args.reps, args.mode)
    failed = [r for r in results if not r.holds]
    text = json.dumps(report_records(results), indent=1) + "\n"
    return text, EXIT_FAILED if failed else EXIT_OK


def _check_theorem(args) -> tuple[str, int]:
    fam = get_family(args.family)
    report = sweep(fam, range(1, args.n_max + 1), args.order_cap)
    return (report.to_json() + "\n") if args.format == "json" else report.to_csv(), EXIT_OK


def _simulate(args) -> tuple[str, int]:
    cfg = SimConfig(args.N, args.trials, args.seed, args.kmax)
    if args.semicircle:
        est = semicircle_trace_moments(cfg)
    elif args.alt_representation:
        est = alternative_representation_moments(cfg)
    else:
        est = tetilla_trace_moments(cfg)
    return est.to_csv(), EXIT_OK


def _kernel(args) -> tuple[str, int]:
    if not args.emit_reference:
        raise UsageError("kernel: nothing to do; pass --emit-reference")
    f = reference_tetilla_kernel(exact=not args.float)
    return json.dumps(f.to_json()) + "\n", EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    parser = _Parser(prog="tetilla", description="Tetilla-law and Wigner-chaos moment toolkit.",
                     epilog="Set TETILLA_CAPACITY to change the path-enumeration budget.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("moments", parents=[common], help="even tetilla moments as exact rationals")
    p.add_argument("--source", choices=["closed", "algorithm", "nc", "kernel"], default="closed",
                   help="closed form, split-sum recursion, cumulant sum over NC partitions, or a kernel")
    p.add_argument("--max-order", type=int, required=True, help="highest even moment order")
    p.add_argument("--kernel", metavar="FILE", help="kernel JSON for --source kernel (default: reference)")
    p.set_defaults(run=_moments)

    p = sub.add_parser("density", parents=[common], help="tetilla density on its support, CSV t,h,h_stieltjes,delta")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--eps", type=float, default=1e-6, help="imaginary offset for Stieltjes inversion")
    p.add_argument("--compare-stieltjes", action="store_true",
                   help=f"also invert the Cauchy transform; exit 2 if any delta exceeds {STIELTJES_TOL}")
    p.set_defaults(run=_density)

    p = sub.add_parser("verify", parents=[common], help="check the double-contraction identities, JSON report")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--q", type=int, default=2, help="kernel order")
    p.add_argument("--grid", type=int, default=2, help="cells per axis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=10, help="number of random kernels")
    p.add_argument("--mode", choices=["rational", "float"], default="rational")
    p.set_defaults(run=_verify)

    names = [f.name for f in builtin_families()]
    p = sub.add_parser("check-theorem", parents=[common], help="convergence report for a kernel family",
                       description="Columns: n, m4, m6, res_<r>_<r'> = ||(f~r f)~r' f||, "
                                   "res_combination = ||-f/2 + sum_r (f~r f)~(q-r) f||, "
                                   "dist_<l> = |m_l - tetilla m_l|.")
    p.add_argument("--family", choices=names, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--order-cap", type=int, default=6, help="highest moment order L (even, <= 10)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(run=_check_theorem)

    p = sub.add_parser("simulate", parents=[common], help="random-matrix trace moments, CSV k,estimate,stderr,target,z")
    p.add_argument("--N", type=int, default=512, help="matrix dimension")
    p.add_argument("--trials", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=8)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alt-representation", action="store_true", help="use (X^2 - Y^2)/sqrt(2)")
    group.add_argument("--semicircle", action="store_true", help="moments of X alone")
    p.set_defaults(run=_simulate)

    p = sub.add_parser("kernel", parents=[common], help="kernel utilities")
    p.add_argument("--emit-reference", action="store_true", help="print the reference kernel as JSON")
    p.add_argument("--float", action="store_true", help="emit float coefficients")
    p.set_defaults(run=_kernel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required; see --help")
        text, code = args.run(args)
    except UsageError as exc:
        print(f"tetilla: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"tetilla: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (TetillaError, OSError, ValueError) as exc:
        print(f"tetilla: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"tetilla: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
