#!/usr/bin/env python3
"""Sanity sweep for the orientation conventions of the chain complex.

Two independent checks:
  1. d.d = 0 over a grid of (field, n, level) combinations (the
     assembler raises on violation, so just building is the check).
  2. at prime level N over Q, rank H_1 equals the genus of the modular
     curve of level N, which pins the ambient character exponent: the
     wrong exponent produces genus-0 failures already at N = 11.
     (Composite levels can carry extra boundary classes, so the genus
     comparison is restricted to primes.)

Run:  python3 scripts/validate_orientation.py [--max-n 20]
"""

import argparse
import sys
import time

from voronoi_torsion.cells import cell_complex
from voronoi_torsion.chain import assemble_complex, voronoi_homology
from voronoi_torsion.cosets import gamma0_cosets
from voronoi_torsion.fieldcat import get_field
from voronoi_torsion.ideals import enumerate_levels, principal

# genus of the classical modular curve at prime level
GENUS = {2: 0, 3: 0, 5: 0, 7: 0, 11: 1, 13: 0, 17: 1, 19: 1, 23: 2,
         29: 2, 31: 2, 37: 2, 41: 3, 43: 3, 47: 4}


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=20)
    args = ap.parse_args(argv)

    failures = 0
    nf = get_field("Q")
    fan = cell_complex(nf, 2)
    for N in range(1, args.max_n + 1):
        t0 = time.monotonic()
        cx = assemble_complex(fan, gamma0_cosets(nf, 2, principal(nf, N)))
        betti, tors = voronoi_homology(cx, 1)
        want = GENUS.get(N)  # None for composite N: d.d = 0 only
        verdict = "ok" if want is None or betti == want else "FAIL"
        failures += verdict == "FAIL"
        print(f"Q  N={N:3d}  H1 rank={betti} torsion={tors.divisors} "
              f"genus={want}  {verdict}  ({time.monotonic() - t0:.1f}s)")

    nfi = get_field("Qi")
    fani = cell_complex(nfi, 2)
    for lev in enumerate_levels(nfi, 1, args.max_n):
        t0 = time.monotonic()
        assemble_complex(fani, gamma0_cosets(nfi, 2, lev))
        print(f"Qi level {lev.hnf_string():>9}  d.d=0 ok "
              f"({time.monotonic() - t0:.1f}s)")

    print("FAILED" if failures else "all checks passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
