"""numkit command line.

``numkit lp solve problem.json --tol 1e-8`` solves an LP stored as JSON
(``null`` bounds mean infinity) and prints status, objective and residuals.
Exit status is 0 when optimal, 1 for any other solver status and 2 for bad
input.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .common import NumkitError
from .optimize import linprog, load_problem


def _finite_or_none(v):
    return float(v) if v is not None and np.isfinite(v) else None


def _cmd_lp_solve(args):
    problem = load_problem(args.problem)
    res = linprog(problem, tol=args.tol, max_iter=args.max_iter, presolve=not args.no_presolve)
    if args.json:
        payload = {
            "status": res.status,
            "objective": _finite_or_none(res.objective),
            "x": None if res.x is None else [float(v) for v in res.x],
            "residuals": {k: float(v) for k, v in res.residuals.items()},
            "iterations": res.iterations,
            "message": res.message,
        }
        if res.certificate is not None:
            payload["certificate"] = res.certificate.kind
        print(json.dumps(payload, indent=2))
    else:
        print(f"status:           {res.status}")
        if res.success:
            print(f"objective:        {res.objective:.12g}")
            print("x:                " + " ".join(f"{v:.10g}" for v in res.x))
        for name, value in res.residuals.items():
            print(f"{name + ':':<18}{value:.3e}")
        if res.certificate is not None:
            print(f"certificate:      {res.certificate.kind}")
        print(f"iterations:       {res.iterations}")
    return 0 if res.success else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="numkit", description="numkit command line tools")
    ap.add_argument("--version", action="version", version=f"numkit {__version__}")
    sub = ap.add_subparsers(dest="group", required=True)
    lp = sub.add_parser("lp", help="linear programming")
    lp_sub = lp.add_subparsers(dest="command", required=True)
    solve = lp_sub.add_parser("solve", help="solve an LP stored as JSON")
    solve.add_argument("problem", help="path to problem JSON")
    solve.add_argument("--tol", type=float, default=1e-8)
    solve.add_argument("--max-iter", type=int, default=200)
    solve.add_argument("--no-presolve", action="store_true")
    solve.add_argument("--json", action="store_true", help="machine-readable output")
    solve.set_defaults(func=_cmd_lp_solve)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumkitError, ValueError, OSError) as exc:
        print(f"numkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
