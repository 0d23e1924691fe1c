"""Command-line entry point: constants, run, plotdata."""

from __future__ import annotations

import argparse
import sys

from . import groups, pipeline


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="voronoi-torsion",
        description="Torsion in the Voronoi homology of congruence "
                    "subgroups, with limiting-constant reports.")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("constants",
                        help="closed-form invariants of a group")
    pc.add_argument("group", choices=sorted(groups.GROUP_CATALOG))

    pr = sub.add_parser("run", help="sweep a range of levels")
    pr.add_argument("--group", required=True,
                    choices=sorted(groups.GROUP_CATALOG))
    pr.add_argument("--n", type=int, default=None,
                    help="rank; must match the group label when given")
    pr.add_argument("--min-norm", type=int, default=1)
    pr.add_argument("--max-norm", type=int, default=10)
    pr.add_argument("--degrees", type=str, default=None,
                    help="comma-separated Voronoi degrees (default: all)")
    pr.add_argument("--budget-sec", type=float, default=3600.0)
    pr.add_argument("--budget-mem", type=int, default=4 * 1024 ** 3)
    pr.add_argument("--out", default="out")
    pr.add_argument("--cache", default=None)

    pp = sub.add_parser("plotdata", help="emit a plot-data file from a CSV")
    pp.add_argument("--csv", required=True)
    pp.add_argument("--out", required=True)
    pp.add_argument("--degree", type=int, required=True)
    pp.add_argument("--order", choices=["index", "norm"], default="index")
    pp.add_argument("--filter", default="all",
                    help="all | prime | tower:<seed>")
    pp.add_argument("--mode", choices=["ratio", "euler"], default="ratio")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "constants":
        pipeline.cmd_constants(args.group)
        return 0
    if args.command == "run":
        g = groups.group_from_label(args.group)
        if args.n is not None and args.n != g.n:
            print(f"--n {args.n} contradicts group {args.group} "
                  f"(n = {g.n})", file=sys.stderr)
            return 2
        degrees = None
        if args.degrees:
            degrees = [int(x) for x in args.degrees.split(",")]
        spec = pipeline.JobSpec(
            group_label=args.group, min_norm=args.min_norm,
            max_norm=args.max_norm, degrees=degrees,
            budget_sec=args.budget_sec, budget_mem=args.budget_mem,
            out_dir=args.out, cache_dir=args.cache)
        ledger = pipeline.cmd_run(spec)
        statuses = [e["status"] for e in ledger.entries.values()]
        print(f"levels: {len(statuses)} "
              f"done={statuses.count('done')} "
              f"skipped-budget={statuses.count('skipped-budget')} "
              f"failed={statuses.count('failed')}")
        return 0
    if args.command == "plotdata":
        try:
            pipeline.cmd_plotdata(args.csv, args.out, args.degree,
                                  args.order, args.filter, args.mode)
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return 2
        return 0
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
