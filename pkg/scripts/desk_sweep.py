#!/usr/bin/env python3
"""Desk-scale sweep driver: the runs that finish on a laptop.

Produces CSVs plus plot-data JSON for the two groups whose torsion
behavior is cheap to compute exactly:

  gl2-Qi  levels of norm <= 20 (all ideals), degrees 1..3
  gl3-Q   levels N <= 8, degrees 1..5

Everything is resumable: rerunning skips completed levels via the
ledger.  Output lands in --out (default ./out).
"""

import argparse
import sys

from voronoi_torsion.pipeline import (JobSpec, cmd_plotdata, cmd_run,
                                      run_output_paths)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    ap.add_argument("--cache", default=None)
    ap.add_argument("--budget-sec", type=float, default=3600.0)
    args = ap.parse_args(argv)

    jobs = [
        JobSpec("gl2-Qi", min_norm=1, max_norm=20,
                out_dir=args.out, cache_dir=args.cache,
                budget_sec=args.budget_sec),
        JobSpec("gl3-Q", min_norm=1, max_norm=8,
                out_dir=args.out, cache_dir=args.cache,
                budget_sec=args.budget_sec),
    ]
    plots = [
        ("gl2-Qi", 1, "norm", "all", "ratio"),
        ("gl2-Qi", 1, "norm", "prime", "ratio"),
        ("gl2-Qi", 2, "norm", "tower:1,1;0,2", "ratio"),
        ("gl3-Q", 3, "index", "all", "ratio"),
        ("gl3-Q", 3, "index", "all", "euler"),
    ]

    for spec in jobs:
        print(f"== {spec.group_label} ==")
        ledger = cmd_run(spec)
        statuses = [e["status"] for e in ledger.entries.values()]
        print(f"   {statuses.count('done')}/{len(statuses)} levels done")

    for label, degree, order, filt, mode in plots:
        spec = next(j for j in jobs if j.group_label == label)
        csv_path, _ = run_output_paths(spec)
        safe = filt.replace(":", "-").replace(";", "_").replace(",", "_")
        out = f"{args.out}/{label}_d{degree}_{mode}_{safe}.json"
        doc = cmd_plotdata(csv_path, out, degree, order, filt, mode)
        print(f"   wrote {out} ({len(doc['rows'])} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
