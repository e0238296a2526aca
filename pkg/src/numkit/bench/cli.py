"""numkit-bench: run benchmarks, compare versions, export timings."""

import argparse
import sys

from .. import __version__
from . import (
    BenchError,
    compare_runs,
    export_csv,
    format_rows,
    load_records,
    parse_params,
    run_suite,
    scaling_exponent,
)


def _cmd_run(args):
    def progress(rec):
        print(f"{rec.case_id}  median {rec.median:.6g} s  min {rec.min:.6g} s", file=sys.stderr)

    records = run_suite(args.suite, parse_params(args.param), args.out, version=args.label,
                        repeats=args.repeats, warmup=args.warmup, progress=progress)
    print(f"{len(records)} record(s)" + (f" appended to {args.out}" if args.out else ""))
    return 0


def _cmd_compare(args):
    rows = compare_runs(load_records(args.store), args.a, args.b, args.threshold)
    sys.stdout.write(format_rows(rows, args.format))
    return 0


def _cmd_export(args):
    text = export_csv(load_records(args.store), args.suite, args.label)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_scaling(args):
    recs = [r for r in load_records(args.store)
            if r.suite == args.suite and (args.label is None or r.version == args.label)
            and (args.m is None or r.params.get("m") == args.m)]
    slope = scaling_exponent([r.params["n"] for r in recs], [r.median for r in recs])
    print(f"{args.suite}: log-log exponent over n = {slope:.3f}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="numkit-bench", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run benchmark suites")
    run.add_argument("--suite", help="suite name or glob (default: all)")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE[,VALUE...]",
                     help="restrict or override a grid axis; repeatable")
    run.add_argument("--out", help="ndjson store to append to")
    run.add_argument("--label", default=__version__, help="version label (default: %(default)s)")
    run.add_argument("--repeats", type=int, default=10)
    run.add_argument("--warmup", type=int, default=3)
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser("compare", help="compare two version labels in a store")
    cmp_.add_argument("--store", required=True)
    cmp_.add_argument("--a", required=True, help="baseline version label")
    cmp_.add_argument("--b", required=True, help="candidate version label")
    cmp_.add_argument("--threshold", type=float, default=1.3)
    cmp_.add_argument("--format", choices=("table", "json", "csv"), default="table")
    cmp_.set_defaults(func=_cmd_compare)

    exp = sub.add_parser("export", help="CSV of n, m, median_seconds")
    exp.add_argument("--store", required=True)
    exp.add_argument("--suite", default="spatial_query")
    exp.add_argument("--label")
    exp.add_argument("--out")
    exp.set_defaults(func=_cmd_export)

    sc = sub.add_parser("scaling", help="fit the log-log time exponent over n")
    sc.add_argument("--store", required=True)
    sc.add_argument("--suite", default="spatial_query")
    sc.add_argument("--label")
    sc.add_argument("--m", type=int)
    sc.set_defaults(func=_cmd_scaling)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BenchError, ValueError) as exc:
        print(f"numkit-bench: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
