"""Smith normal form of sparse integer matrices and homology extraction.

Strategy: eliminate unit pivots sparsely (Markowitz scoring, deterministic
tie-breaks) — each such pivot contributes an elementary divisor 1 — then run
a dense arbitrary-precision SNF on whatever core remains.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Tuple

import sympy

from .sparse import SparseIntMatrix, rank_mod_p


@dataclass
class ElementaryDivisors:
    rank: int
    divisors: Tuple[int, ...]  # nontrivial divisors only, d_i | d_{i+1}

    def torsion_order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def __post_init__(self):
        for a, b in zip(self.divisors, self.divisors[1:]):
            assert b % a == 0, "divisibility chain violated"
        assert all(d > 1 for d in self.divisors)


class ResourceError(RuntimeError):
    """Reduced core exceeded the memory budget; carries its dimensions."""

    def __init__(self, rows, cols):
        super().__init__(f"dense SNF core too large: {rows} x {cols}")
        self.core_shape = (rows, cols)


def _dense_snf_divisors(mat: List[List[int]]) -> List[int]:
    """Diagonal of the Smith form of a dense integer matrix (in-place)."""
    a = [list(map(int, row)) for row in mat]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    divisors = []
    top = 0
    while True:
        # find a nonzero entry in the remaining block
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        a[top], a[bi] = a[bi], a[top]
        for row in a:
            row[top], row[bj] = row[bj], row[top]
        while True:
            # clear column by euclidean row steps
            again = False
            for i in range(top + 1, nrows):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        again = True
            if again:
                continue
            for j in range(top + 1, ncols):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    if q:
                        for row in a:
                            row[j] -= q * row[top]
                    if a[top][j]:
                        for row in a:
                            row[top], row[j] = row[j], row[top]
                        again = True
            if not again:
                break
        # pivot must divide the rest of the block
        piv = abs(a[top][top])
        offender = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if a[i][j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[top] = [x + y for x, y in zip(a[top], a[offender])]
            continue
        divisors.append(piv)
        top += 1
        if top == min(nrows, ncols):
            break
    return divisors


def smith_normal_form(m: SparseIntMatrix,
                      max_core_entries: int = 30_000_000) -> ElementaryDivisors:
    """Rank and nontrivial elementary divisors of an integer matrix."""
    rows: Dict[int, Dict[int, int]] = {i: dict(r) for i, r in m.row.items()}
    colrows: Dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            colrows.setdefault(j, set()).add(i)
    unit_rank = 0
    while True:
        best = None
        for i in sorted(rows):
            r = rows[i]
            rf = len(r) - 1
            for j in sorted(r):
                if abs(r[j]) != 1:
                    continue
                score = rf * (len(colrows[j]) - 1)
                if best is None or score < best[0]:
                    best = (score, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        for j in prow:
            colrows[j].discard(pi)
        unit_rank += 1
        piv = prow[pj]
        for i in list(colrows.get(pj, ())):
            r = rows[i]
            f = r[pj] * piv  # piv is +-1 so this is r[pj]/piv
            for j, v in prow.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        colrows.setdefault(j, set()).add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    colrows[j].discard(i)
            if not r:
                del rows[i]
        colrows.pop(pj, None)
    # dense core
    live_rows = sorted(rows)
    live_cols = sorted({j for r in rows.values() for j in r})
    if len(live_rows) * len(live_cols) > max_core_entries:
        raise ResourceError(len(live_rows), len(live_cols))
    cmap = {j: k for k, j in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for k, i in enumerate(live_rows):
        for j, v in rows[i].items():
            dense[k][cmap[j]] = v
    core_divs = _dense_snf_divisors(dense) if live_rows else []
    divisors = tuple(sorted(d for d in core_divs if d > 1))
    return ElementaryDivisors(rank=unit_rank + len(core_divs),
                              divisors=divisors)


_CERT_PRIMES = (1000003, 1000033)


def homology_of_pair(d_k: SparseIntMatrix, d_k1: SparseIntMatrix
                     ) -> Tuple[int, ElementaryDivisors]:
    """(betti, torsion) of ker(d_k)/im(d_{k+1}).

    Requires d_k * d_{k+1} = 0.  The kernel of d_k is a saturated (pure)
    submodule of the ambient free module, so the torsion of the quotient is
    read off from the elementary divisors of d_{k+1} alone.
    """
    assert d_k.cols == d_k1.rows, "degree mismatch between boundary maps"
    if not d_k.mul(d_k1).is_zero():
        raise ValueError("boundary maps do not compose to zero")
    snf1 = smith_normal_form(d_k1)
    # certify rank of d_k by agreement of two large-prime modular ranks;
    # escalate to a full SNF when they disagree
    ranks = {rank_mod_p(d_k, p) for p in _CERT_PRIMES}
    if len(ranks) == 1:
        rank_k = ranks.pop()
    else:
        rank_k = smith_normal_form(d_k).rank
    r1 = {rank_mod_p(d_k1, p) for p in _CERT_PRIMES}
    if r1 != {snf1.rank}:
        # modular rank can only undershoot; SNF rank is the exact one
        assert max(r1) <= snf1.rank
    betti = d_k.cols - rank_k - snf1.rank
    assert betti >= 0
    torsion = ElementaryDivisors(rank=snf1.rank, divisors=snf1.divisors)
    return betti, torsion


def factor_torsion(divisors: ElementaryDivisors, budget_sec: float = 5.0
                   ) -> Tuple[Dict[int, int], List[int]]:
    """(prime -> exponent, unfactored residuals) for the torsion order.

    Trial division plus Pollard rho inside the time budget; whatever is
    left composite is returned as a residual, which is a valid outcome.
    """
    deadline = time.monotonic() + budget_sec
    factors: Dict[int, int] = {}
    residuals: List[int] = []

    def emit(p, e):
        factors[p] = factors.get(p, 0) + e

    def work(n):
        if n == 1:
            return
        if sympy.isprime(n):
            emit(n, 1)
            return
        # cheap trial division first
        for p in sympy.primerange(2, 100000):
            while n % p == 0:
                emit(p, 1)
                n //= p
            if n == 1:
                return
            if time.monotonic() > deadline:
                residuals.append(n)
                return
        if sympy.isprime(n):
            emit(n, 1)
            return
        d = _pollard_rho(n, deadline)
        if d is None:
            residuals.append(n)
            return
        work(d)
        work(n // d)

    for d in divisors.divisors:
        work(d)
    return factors, sorted(residuals)


def _pollard_rho(n: int, deadline: float):
    if n % 2 == 0:
        return 2
    c = 1
    while time.monotonic() < deadline:
        x = y = 2
        d = 1
        count = 0
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
            count += 1
            if count % 1024 == 0 and time.monotonic() > deadline:
                return None
        if d != n:
            return d
        c += 1
    return None
