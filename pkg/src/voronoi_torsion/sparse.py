"""Sparse exact integer matrices and mod-p rank computation.

The sparse format is dict-of-rows with big integers.  Mod-p elimination
uses Markowitz pivoting restricted (in the integer pre-elimination used by
the Smith normal form driver) to unit pivots; here over GF(p) any nonzero
pivot works.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Tuple


class SparseIntMatrix:
    """Exact integer sparse matrix; no explicit zeros stored."""

    def __init__(self, rows: int, cols: int,
                 entries: Iterable[Tuple[int, int, int]] = ()):
        self.rows = rows
        self.cols = cols
        self.row: Dict[int, Dict[int, int]] = {}
        for i, j, v in entries:
            self[i, j] = v

    def __setitem__(self, key, v):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        r = self.row.setdefault(i, {})
        if v:
            r[j] = int(v)
        else:
            r.pop(j, None)
            if not r:
                self.row.pop(i, None)

    def __getitem__(self, key):
        i, j = key
        return self.row.get(i, {}).get(j, 0)

    def add_at(self, i, j, v):
        self[i, j] = self[i, j] + v

    def nnz(self) -> int:
        return sum(len(r) for r in self.row.values())

    def entries(self) -> List[Tuple[int, int, int]]:
        out = []
        for i in sorted(self.row):
            for j in sorted(self.row[i]):
                out.append((i, j, self.row[i][j]))
        return out

    def copy(self) -> "SparseIntMatrix":
        m = SparseIntMatrix(self.rows, self.cols)
        for i, r in self.row.items():
            m.row[i] = dict(r)
        return m

    def transpose(self) -> "SparseIntMatrix":
        m = SparseIntMatrix(self.cols, self.rows)
        for i, r in self.row.items():
            for j, v in r.items():
                m[j, i] = v
        return m

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in self.row.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    @classmethod
    def from_dense(cls, mat) -> "SparseIntMatrix":
        rows = len(mat)
        cols = len(mat[0]) if rows else 0
        m = cls(rows, cols)
        for i in range(rows):
            for j in range(cols):
                if mat[i][j]:
                    m[i, j] = int(mat[i][j])
        return m

    def mul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        assert self.cols == other.rows
        out = SparseIntMatrix(self.rows, other.cols)
        for i, r in self.row.items():
            acc: Dict[int, int] = {}
            for k, v in r.items():
                orow = other.row.get(k)
                if not orow:
                    continue
                for j, w in orow.items():
                    acc[j] = acc.get(j, 0) + v * w
            for j, v in acc.items():
                if v:
                    out.row.setdefault(i, {})[j] = v
        return out

    def is_zero(self) -> bool:
        return not self.row


def rank_mod_p(m: SparseIntMatrix, p: int) -> int:
    """Rank over GF(p) by sparse elimination with Markowitz pivot choice."""
    # column -> set of rows with a nonzero entry there (mod p)
    rows: Dict[int, Dict[int, int]] = {}
    colrows: Dict[int, set] = {}
    for i, r in m.row.items():
        rr = {}
        for j, v in r.items():
            vp = v % p
            if vp:
                rr[j] = vp
        if rr:
            rows[i] = rr
            for j in rr:
                colrows.setdefault(j, set()).add(i)
    rank = 0
    while rows:
        # Markowitz: minimize (row fill - 1) * (col fill - 1), deterministic
        # tie-break by lowest row then lowest column
        best = None
        for i in sorted(rows):
            r = rows[i]
            rf = len(r) - 1
            for j in sorted(r):
                score = rf * (len(colrows[j]) - 1)
                if best is None or score < best[0]:
                    best = (score, i, j)
            if best[0] == 0:
                break
        _, pi, pj = best
        prow = rows.pop(pi)
        for j in prow:
            colrows[j].discard(pi)
        rank += 1
        pinv = pow(prow[pj], p - 2, p)
        touched = [i for i in colrows.get(pj, set())]
        for i in touched:
            r = rows[i]
            f = (r[pj] * pinv) % p
            for j, v in prow.items():
                nv = (r.get(j, 0) - f * v) % p
                if nv:
                    if j not in r:
                        colrows.setdefault(j, set()).add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    colrows[j].discard(i)
            if not r:
                del rows[i]
    return rank


def dense_rank_mod_p(mat: List[List[int]], p: int) -> int:
    """Plain dense Gaussian elimination over GF(p); the test oracle."""
    a = [[v % p for v in row] for row in mat]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], p - 2, p)
        a[row] = [(x * inv) % p for x in a[row]]
        for i in range(nrows):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank
