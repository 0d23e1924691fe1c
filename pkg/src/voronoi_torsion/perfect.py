"""Perfect-form enumeration by Voronoi neighbor walking.

A perfect form is walked to its neighbors across the facets of its perfect
pyramid; the walk closes up after finitely many equivalence classes.  The
seed form per (field, n) is the A_n-type form over Q and a perfected
identity form over the imaginary quadratics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .fieldcat import NumberField
from . import forms
from .forms import (FormPoint, IntVec, canonical_sign, check_voronoi_supported,
                    form_space_dim, from_vcoords, is_positive_definite,
                    kernel_vector, minimal_vectors, ovector, q_map,
                    rational_rank, vcoords)
from . import isometry


class IncompleteEnumerationError(RuntimeError):
    """Walk budget exceeded; carries the open frontier of forms."""

    def __init__(self, frontier):
        super().__init__(f"perfect-form walk budget exceeded; "
                         f"{len(frontier)} forms on the open frontier")
        self.frontier = frontier


@dataclass(frozen=True)
class PerfectForm:
    point: FormPoint
    minimum: Fraction
    minimal_vectors: Tuple[IntVec, ...]  # closed under sign

    @property
    def rays(self) -> Tuple[IntVec, ...]:
        nf = self.point.field
        return tuple(sorted({forms.canonical_ray(nf, v)
                             for v in self.minimal_vectors}))


def make_perfect_form(point: FormPoint) -> PerfectForm:
    m, vecs = minimal_vectors(point)
    return PerfectForm(point, m, tuple(vecs))


def seed_form(nf: NumberField, n: int) -> FormPoint:
    """A positive definite starting form (not necessarily perfect)."""
    check_voronoi_supported(nf)
    if nf.degree == 1:
        # the A_n root lattice Gram: 2 on the diagonal, -1 next to it
        g = [[Fraction(2 if i == j else (-1 if abs(i - j) == 1 else 0))
              for j in range(n)] for i in range(n)]
        return FormPoint(nf, n, tuple(tuple(row) for row in g))
    # identity Hermitian form on O^n through the trace construction
    coords = [Fraction(1)] * n + [Fraction(0)] * (form_space_dim(nf, n) - n)
    return from_vcoords(nf, n, coords)


def _eval_matrix(nf: NumberField, n: int, vectors: Sequence[IntVec]):
    """Rows: evaluation of each Hermitian basis form at each vector."""
    basis = forms.hermitian_basis_grams(nf.label, n)
    return [[b.value(v) for b in basis] for v in vectors]


def perfection_defect_direction(pf: PerfectForm) -> Optional[List[Fraction]]:
    """V-coords of a nonzero form H with H[w] = 0 on all minimal vectors,
    or None when the form is perfect."""
    nf = pf.point.field
    e = _eval_matrix(nf, pf.point.n, pf.rays)
    return kernel_vector(e)


def _walk_to_boundary(point: FormPoint, m: Fraction, h: FormPoint
                      ) -> FormPoint:
    """The form point + rho*h with rho > 0 maximal such that the minimum
    is still m; h must be >= 0 on the current minimal vectors (so the
    minimum is pinned at m by the vectors h vanishes on) and the direction
    must eventually pick up a new minimal vector with h < 0."""
    lo = Fraction(0)  # largest rho known to stay inside the pyramid
    hi = None         # smallest rho known to have left the positive cone
    rho = Fraction(1)
    for _ in range(10000):
        cand = point.add(h, rho)
        ok, _ = is_positive_definite(cand)
        if not ok:
            hi = rho
            rho = (lo + hi) / 2
            continue
        mm, vecs = minimal_vectors(cand)
        if mm < m:
            bounds = []
            for v in vecs:
                hv = h.value(v)
                if hv < 0:
                    bounds.append((point.value(v) - m) / -hv)
            assert bounds, "minimum dropped with no negative direction"
            rho = min(bounds)
            continue
        # mm == m here (cannot exceed m: the facet vectors keep value m)
        if any(h.value(v) < 0 for v in vecs):
            return cand
        lo = rho
        rho = lo * 2 if hi is None else (lo + hi) / 2
    raise RuntimeError("boundary walk failed to terminate")


def perfect_from_seed(nf: NumberField, n: int) -> PerfectForm:
    """Repair the seed to a perfect form by walking inside the fiber of
    forms sharing the current minimal vectors."""
    point = seed_form(nf, n)
    pf = make_perfect_form(point)
    while True:
        hv = perfection_defect_direction(pf)
        if hv is None:
            return pf
        h = from_vcoords(nf, n, hv)
        for direction in (h, h.scale(-1)):
            try:
                cand = _walk_to_boundary(pf.point, pf.minimum, direction)
            except RuntimeError:
                continue
            new = make_perfect_form(cand)
            if len(new.rays) > len(pf.rays):
                pf = new
                break
        else:
            raise RuntimeError("perfection repair made no progress")


def facets_of_cone(eval_rows) -> List[Tuple[frozenset, List[Fraction]]]:
    """Facets of the cone spanned by rays with the given evaluation rows.

    eval_rows[j] are coordinates of ray j in any linear coordinate system
    on the ambient space (here: values of the Hermitian basis forms).
    Returns (incident ray index set, normal h) pairs where h lives in the
    same coordinate system, vanishes on the facet and is positive on the
    other rays; the normal is supported on the pivot coordinates of the
    ray span, so it represents a supporting functional of the cell itself.
    """
    k = len(eval_rows)
    ncols = len(eval_rows[0])
    m = rational_rank(eval_rows)
    # pivot columns of the row space: injective coordinates for the span
    mat = [list(map(Fraction, r)) for r in eval_rows]
    pivots = []
    row = 0
    work = [list(r) for r in mat]
    for col in range(ncols):
        piv = next((i for i in range(row, k) if work[i][col]), None)
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        for i in range(k):
            if i != row and work[i][col]:
                f = work[i][col] / work[row][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    red = [[mat[j][p] for p in pivots] for j in range(k)]  # k x m
    facets = {}
    for subset in itertools.combinations(range(k), m - 1):
        sub = [red[j] for j in subset]
        if rational_rank(sub) != m - 1:
            continue
        nvec = kernel_vector(sub)
        if nvec is None:
            continue
        vals = [sum(a * b for a, b in zip(red[j], nvec)) for j in range(k)]
        pos = any(v > 0 for v in vals)
        neg = any(v < 0 for v in vals)
        if pos and neg:
            continue
        if neg:
            nvec = [-x for x in nvec]
            vals = [-v for v in vals]
        incident = frozenset(j for j in range(k) if vals[j] == 0)
        if incident in facets:
            continue
        inc_rows = [red[j] for j in incident]
        if rational_rank(inc_rows) != m - 1:
            continue
        h = [Fraction(0)] * ncols
        for p, np_ in zip(pivots, nvec):
            h[p] = np_
        facets[incident] = h
    return sorted(facets.items(), key=lambda t: sorted(t[0]))


def neighbor(pf: PerfectForm, h_coords: Sequence[Fraction]) -> PerfectForm:
    """The contiguous perfect form across the facet with normal h."""
    nf = pf.point.field
    # h vanishes on the facet rays and is positive on the remaining rays:
    # moving along +h keeps the facet rays minimal, pushes the others out
    # of the minimal set and pulls in the neighbor's new minimal vectors
    h = from_vcoords(nf, pf.point.n, h_coords)
    cand = _walk_to_boundary(pf.point, pf.minimum, h)
    return make_perfect_form(cand)


def _form_fingerprint(pf: PerfectForm):
    nf = pf.point.field
    herm = _hermitian_of(pf.point)
    norms = sorted(isometry.hermitian_pairing(
        nf, herm, ovector(nf, v), ovector(nf, v)) for v in pf.rays)
    return (len(pf.minimal_vectors), pf.minimum, tuple(norms))


def _hermitian_of(point: FormPoint):
    return vcoords_to_hermitian(point.field, point.n, vcoords(point))


def vcoords_to_hermitian(nf: NumberField, n: int, coords) -> isometry.FMat:
    h = [[nf.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        h[i][i] = nf.scal(coords[i], nf.one())
    idx = n
    d = nf.degree
    for i in range(n):
        for j in range(i + 1, n):
            acc = nf.zero()
            for m in range(d):
                acc = nf.add(acc, nf.scal(coords[idx], nf.basis_element(m)))
                idx += 1
            h[i][j] = acc
            h[j][i] = nf.conj(acc)
    return tuple(tuple(row) for row in h)


def forms_equivalent(a: PerfectForm, b: PerfectForm) -> Optional[isometry.FMat]:
    """A transporter gamma with gamma . a = b (same minimum assumed)."""
    nf = a.point.field
    if _form_fingerprint(a) != _form_fingerprint(b):
        return None
    va = [ovector(nf, v) for v in a.rays]
    vb = [ovector(nf, v) for v in b.rays]
    res = isometry.find_isometries(nf, va, _hermitian_of(a.point),
                                   vb, _hermitian_of(b.point))
    return res[0] if res else None


def enumerate_perfect_forms(nf: NumberField, n: int, max_classes: int = 64
                            ) -> List[PerfectForm]:
    """Representatives of the GL_n(O)-classes of perfect forms."""
    start = perfect_from_seed(nf, n)
    classes = [start]
    frontier = [start]
    while frontier:
        pf = frontier.pop(0)
        rays = pf.rays
        e = _eval_matrix(nf, n, rays)
        for incident, h in facets_of_cone(e):
            # facets lying in the boundary of the positive cone have no
            # contiguous pyramid; only facets meeting C are crossed
            inc_vecs = [ovector(nf, rays[j]) for j in incident]
            if isometry._f_rank(nf, inc_vecs) < n:
                continue
            nb = neighbor(pf, h)
            if any(forms_equivalent(nb, c) for c in classes):
                continue
            if len(classes) >= max_classes:
                raise IncompleteEnumerationError(frontier + [nb])
            classes.append(nb)
            frontier.append(nb)
    return classes
