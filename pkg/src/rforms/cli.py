"""Command-line front end: ``verify --series sp --n 4 --suites bwm``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .verify import SUITES, ConfigError, RunConfig, exit_code, report_diff, run, serialize
from .words import DegreeOverflow, ResourceBound

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


def _suites(text):
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}")
    return names


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser():
    p = argparse.ArgumentParser(prog="verify", description="Exact checks of universal r-forms on FRT quantum groups.")
    p.add_argument("--series", choices=("gl", "sl", "o", "sp"), type=str.lower)
    p.add_argument("--n", type=int, dest="N")
    p.add_argument("--z", default="generic", help="scale of r_z, an expression in q and t = q^(1/2)")
    p.add_argument("--zeta", action="append", default=[], help="central bicharacter parameter (repeatable)")
    p.add_argument("--degree", type=int, default=2, help="degree bound D, at most 3")
    p.add_argument("--suites", type=_suites, default=SUITES, help="comma-separated subset of " + ",".join(SUITES))
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--threads", type=int, default=0, help="worker threads (0 = available cores)")
    p.add_argument("--t0", type=_rational, help="rational point for the fast pre-check")
    p.add_argument("--invert-q", action="store_true", help="classify with Rhat(q^-1) for the solution-set record")
    p.add_argument("--timings", action="store_true", help="include wall_time_ms in each record")
    p.add_argument("--diff", nargs=2, metavar=("A", "B"), help="compare two reports and exit")
    p.add_argument("--only", action="append", help="with --diff: restrict to check ids with this prefix")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.diff:
        try:
            texts = [open(path, encoding="utf-8").read() for path in args.diff]
            out = report_diff(*texts, only=args.only)
        except (OSError, ValueError) as exc:
            print(f"verify: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        if out:
            print(out)
        return EXIT_FAIL if out else EXIT_PASS
    if args.series is None or args.N is None:
        parser.print_usage(sys.stderr)
        print("verify: --series and --n are required", file=sys.stderr)
        return EXIT_CONFIG
    config = RunConfig(args.series, args.N, args.z, tuple(args.zeta), args.degree, args.suites,
                       args.out, args.threads, args.t0, args.invert_q)
    try:
        reports = run(config)
    except ConfigError as exc:
        print(f"verify: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceBound, DegreeOverflow) as exc:
        print(f"verify: resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    text = serialize(reports, config, timing=args.timings)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r.check_id for r in reports if r.status == "fail"]
    tally = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
    print(f"{tally['pass']} passed, {tally['fail']} failed, {tally['skipped']} skipped"
          + (f": {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
