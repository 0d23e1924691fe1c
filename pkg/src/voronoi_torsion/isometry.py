"""Backtracking isometry search between configurations of O^n vectors.

Used for perfect-form equivalence, cell equivalence and cell stabilizers.
The invariant that drives the search: if gamma maps configuration a to b
and Q_b = gamma . Q_a (Hermitian forms transported along), then the
Hermitian pairings  ip(w, w') = w^* Q^{-1}-or-Q w'  match up to the chosen
signs of representatives.  With the vectors spanning F^n the transporter
is determined by a ray bijection, so the search is finite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .fieldcat import Coords, NumberField

FMat = Tuple[Tuple[Coords, ...], ...]


def f_mat_mul(nf: NumberField, a: FMat, b: FMat) -> FMat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = nf.zero()
            for k in range(n):
                acc = nf.add(acc, nf.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def f_identity(nf: NumberField, n: int) -> FMat:
    return tuple(tuple(nf.one() if i == j else nf.zero() for j in range(n))
                 for i in range(n))


def f_mat_inv(nf: NumberField, a: FMat) -> FMat:
    """Inverse over the field F by Gauss-Jordan elimination."""
    n = len(a)
    aug = [list(a[i]) + list(f_identity(nf, n)[i]) for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if any(aug[i][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = nf.inv(aug[col][col])
        aug[col] = [nf.mul(inv, x) for x in aug[col]]
        for i in range(n):
            if i != col and any(aug[i][col]):
                f = aug[i][col]
                aug[i] = [nf.sub(x, nf.mul(f, y))
                          for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(aug[i][n:]) for i in range(n))


def f_det(nf: NumberField, a: FMat) -> Coords:
    n = len(a)
    mat = [list(row) for row in a]
    det = nf.one()
    for col in range(n):
        piv = next((i for i in range(col, n) if any(mat[i][col])), None)
        if piv is None:
            return nf.zero()
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = nf.neg(det)
        det = nf.mul(det, mat[col][col])
        inv = nf.inv(mat[col][col])
        for i in range(col + 1, n):
            if any(mat[i][col]):
                f = nf.mul(mat[i][col], inv)
                mat[i] = [nf.sub(x, nf.mul(f, y))
                          for x, y in zip(mat[i], mat[col])]
    return det


def hermitian_pairing(nf: NumberField, h: FMat, w: Sequence[Coords],
                      wp: Sequence[Coords]) -> Coords:
    """w^* h w' over F."""
    n = len(h)
    acc = nf.zero()
    for i in range(n):
        ci = nf.conj(w[i])
        for j in range(n):
            if any(h[i][j]):
                acc = nf.add(acc, nf.mul(ci, nf.mul(h[i][j], wp[j])))
    return acc


def gram_over_f(nf: NumberField, vectors: Sequence[Sequence[Coords]]) -> FMat:
    """Sum of w w^* over the vectors; positive definite iff they span F^n."""
    n = len(vectors[0])
    out = [[nf.zero() for _ in range(n)] for _ in range(n)]
    for w in vectors:
        cw = [nf.conj(x) for x in w]
        for i in range(n):
            for j in range(n):
                out[i][j] = nf.add(out[i][j], nf.mul(w[i], cw[j]))
    return tuple(tuple(row) for row in out)


def _f_rank(nf: NumberField, vectors: Sequence[Sequence[Coords]]) -> int:
    rows = [list(v) for v in vectors]
    n = len(rows[0]) if rows else 0
    rank = 0
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(rows)) if any(rows[i][col])),
                   None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = nf.inv(rows[row][col])
        for i in range(row + 1, len(rows)):
            if any(rows[i][col]):
                f = nf.mul(rows[i][col], inv)
                rows[i] = [nf.sub(x, nf.mul(f, y))
                           for x, y in zip(rows[i], rows[row])]
        rank += 1
        row += 1
    return rank


def spanning_subset(nf: NumberField, vectors) -> Optional[List[int]]:
    """Indices of an F-basis of F^n drawn from the vectors, or None."""
    n = len(vectors[0])
    chosen: List[int] = []
    rows: List[List[Coords]] = []
    for idx, v in enumerate(vectors):
        if _f_rank(nf, rows + [list(v)]) > len(rows):
            rows.append(list(v))
            chosen.append(idx)
            if len(chosen) == n:
                return chosen
    return None


def solve_gamma(nf: NumberField, sources, images) -> Optional[FMat]:
    """gamma with gamma . sources[k] = images[k]; sources must be a basis."""
    n = len(sources[0])
    w = tuple(tuple(sources[k][i] for k in range(n)) for i in range(n))
    img = tuple(tuple(images[k][i] for k in range(n)) for i in range(n))
    return f_mat_mul(nf, img, f_mat_inv(nf, w))


def is_integral_matrix(nf: NumberField, gamma: FMat) -> bool:
    return all(nf.is_integral(x) for row in gamma for x in row)


def is_glno(nf: NumberField, gamma: FMat) -> bool:
    return is_integral_matrix(nf, gamma) and nf.is_unit(f_det(nf, gamma))


def find_isometries(nf: NumberField, vectors_a, herm_a, vectors_b, herm_b,
                    find_all: bool = False, limit: int = 200000
                    ) -> List[FMat]:
    """gamma in GL_n(O) mapping the ray set of a to that of b (each vector
    lands on a root-of-unity multiple of a b-vector) and transporting the
    pairing of herm_a to that of herm_b.

    herm_* are Hermitian matrices over F invariantly attached to the
    configurations (for cells, the inverse of sum w w^*; the pairing
    w^* herm w' is then preserved).  Returns one transporter unless
    find_all (used for stabilizers).
    """
    ka, kb = len(vectors_a), len(vectors_b)
    if ka != kb:
        return []
    units = nf.roots_of_unity()
    cunits = [nf.conj(u) for u in units]
    ipa = [[hermitian_pairing(nf, herm_a, vectors_a[i], vectors_a[j])
            for j in range(ka)] for i in range(ka)]
    ipb = [[hermitian_pairing(nf, herm_b, vectors_b[i], vectors_b[j])
            for j in range(kb)] for i in range(kb)]
    if sorted(ipa[i][i] for i in range(ka)) != sorted(ipb[i][i]
                                                      for i in range(kb)):
        return []
    base = spanning_subset(nf, vectors_a)
    assert base is not None, "cell vectors must span F^n"
    results: List[FMat] = []
    assign: List[Tuple[int, int]] = []  # (target index, unit index)

    def compatible(i, j, ui):
        # gamma a_i = units[ui] * b_j forces
        #   ip_a(i, i2) = conj(u) * u2 * ip_b(j, j2)
        if ipa[i][i] != ipb[j][j]:
            return False
        cu = cunits[ui]
        for (i2, (j2, u2i)) in enumerate(assign):
            fac = nf.mul(cu, units[u2i])
            if ipa[i][i2] != nf.mul(fac, ipb[j][j2]):
                return False
        return True

    used = set()
    count = [0]
    target = {}
    for idx, v in enumerate(vectors_b):
        for u in units:
            target[tuple(nf.mul(u, x) for x in v)] = idx

    def rec(i):
        if results and not find_all:
            return
        count[0] += 1
        if count[0] > limit:
            raise RuntimeError("isometry search budget exceeded")
        if i == ka:
            srcs = [vectors_a[k] for k in base]
            imgs = []
            for k in base:
                j, ui = assign[k]
                v = vectors_b[j]
                imgs.append(tuple(nf.mul(units[ui], x) for x in v))
            gamma = solve_gamma(nf, srcs, imgs)
            if gamma is None or not is_glno(nf, gamma):
                return
            # verify the full bijection up to roots of unity
            from .forms import apply_gamma
            hit = set()
            for w in vectors_a:
                img = tuple(apply_gamma(nf, gamma, w))
                j = target.get(img)
                if j is None or j in hit:
                    return
                hit.add(j)
            results.append(gamma)
            return
        for j in range(kb):
            if j in used:
                continue
            for ui in range(len(units)):
                if compatible(i, j, ui):
                    assign.append((j, ui))
                    used.add(j)
                    rec(i + 1)
                    used.discard(j)
                    assign.pop()
                    if results and not find_all:
                        return
        return

    rec(0)
    return results
