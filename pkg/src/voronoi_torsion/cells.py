"""The retained cells of the Koecher fan, graded by dimension, with
stabilizers and incidence data.

Cells are handled through their spanning rays q(w); a cell is retained
exactly when its cone meets the open cone of positive definite forms,
which happens iff the w-vectors span F^n — and then the stabilizer is
finite and the isometry search of `isometry` applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .fieldcat import NumberField
from . import forms, isometry, perfect
from .forms import IntVec, canonical_ray, ovector


@dataclass(frozen=True)
class KoecherCell:
    """A cell given by canonical representatives of its spanning rays."""

    field: NumberField
    n: int
    vectors: Tuple[IntVec, ...]  # sorted canonical ray reps

    @property
    def ray_count(self) -> int:
        return len(self.vectors)

    def ovectors(self):
        return [ovector(self.field, v) for v in self.vectors]


def make_cell(nf: NumberField, n: int, vectors: Sequence[IntVec]
              ) -> KoecherCell:
    canon = sorted({canonical_ray(nf, v) for v in vectors})
    return KoecherCell(nf, n, tuple(canon))


def cell_rank(cell: KoecherCell) -> int:
    """Dimension of the spanned cone (the cell's Voronoi degree is this
    minus one)."""
    e = perfect._eval_matrix(cell.field, cell.n, cell.vectors)
    return forms.rational_rank(e)


def meets_positive_cone(cell: KoecherCell) -> bool:
    return isometry._f_rank(cell.field, cell.ovectors()) == cell.n


def _cell_herm(cell: KoecherCell):
    """The invariant Hermitian pairing matrix (sum w w^*)^{-1}."""
    a = isometry.gram_over_f(cell.field, cell.ovectors())
    return isometry.f_mat_inv(cell.field, a)


def _cell_fingerprint(cell: KoecherCell):
    nf = cell.field
    herm = _cell_herm(cell)
    ov = cell.ovectors()
    norms = sorted(isometry.hermitian_pairing(nf, herm, w, w) for w in ov)
    return (cell.ray_count, tuple(norms))


def equivalent_cells(a: KoecherCell, b: KoecherCell
                     ) -> Optional[isometry.FMat]:
    """A transporter gamma with gamma . a = b, or None."""
    if a.field.label != b.field.label or a.n != b.n:
        raise ValueError("cells from different fans")
    if a.vectors == b.vectors:
        return isometry.f_identity(a.field, a.n)
    if _cell_fingerprint(a) != _cell_fingerprint(b):
        return None
    res = isometry.find_isometries(a.field, a.ovectors(), _cell_herm(a),
                                   b.ovectors(), _cell_herm(b))
    return res[0] if res else None


def stabilizer(cell: KoecherCell) -> List[isometry.FMat]:
    """All gamma in GL_n(O) with gamma . cell = cell (full element list)."""
    herm = _cell_herm(cell)
    ov = cell.ovectors()
    return isometry.find_isometries(cell.field, ov, herm, ov, herm,
                                    find_all=True)


@dataclass
class CellOrbit:
    index: int               # position within its dimension stratum
    rank: int                # cone dimension; Voronoi degree = rank - 1
    cell: KoecherCell
    stabilizer_elements: List[isometry.FMat] = field(default_factory=list)
    # facets of this orbit's representative: (facet cell, orbit index in
    # the rank-1 stratum, transporter gamma with gamma . rep = facet cell)
    facets: List[Tuple[KoecherCell, int, isometry.FMat]] = \
        field(default_factory=list)


@dataclass
class CellComplexData:
    field: NumberField
    n: int
    # rank -> orbits of that cone dimension
    strata: Dict[int, List[CellOrbit]]

    @property
    def top_rank(self) -> int:
        return max(self.strata)

    def degrees(self) -> List[int]:
        return sorted(r - 1 for r in self.strata)


def cell_complex(nf: NumberField, n: int,
                 perfect_forms: Optional[List[perfect.PerfectForm]] = None
                 ) -> CellComplexData:
    """GL_n(O)-orbits of retained fan cells with incidence, by descent
    from the perfect pyramids."""
    if perfect_forms is None:
        perfect_forms = perfect.enumerate_perfect_forms(nf, n)
    top = forms.form_space_dim(nf, n)
    strata: Dict[int, List[CellOrbit]] = {}
    strata[top] = []
    for pf in perfect_forms:
        cell = make_cell(nf, n, pf.rays)
        orb = CellOrbit(len(strata[top]), top, cell)
        orb.stabilizer_elements = stabilizer(cell)
        strata[top].append(orb)
    rank = top
    while rank - 1 >= n:
        lower: List[CellOrbit] = []
        for orb in strata[rank]:
            cell = orb.cell
            e = perfect._eval_matrix(nf, n, cell.vectors)
            for incident, _h in perfect.facets_of_cone(e):
                fcell = make_cell(nf, n,
                                  [cell.vectors[j] for j in incident])
                if not meets_positive_cone(fcell):
                    continue
                placed = False
                for cand in lower:
                    gamma = equivalent_cells(cand.cell, fcell)
                    if gamma is not None:
                        orb.facets.append((fcell, cand.index, gamma))
                        placed = True
                        break
                if not placed:
                    newo = CellOrbit(len(lower), rank - 1, fcell)
                    newo.stabilizer_elements = stabilizer(fcell)
                    lower.append(newo)
                    orb.facets.append(
                        (fcell, newo.index,
                         isometry.f_identity(nf, n)))
        if lower:
            strata[rank - 1] = lower
        rank -= 1
        if rank not in strata:
            break
    return CellComplexData(nf, n, strata)
