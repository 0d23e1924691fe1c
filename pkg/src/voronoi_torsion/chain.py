"""Assembly of the chain complex on Gamma_0(n)-orbit generators.

Generators in degree k are pairs (cell orbit of cone rank k+1, coset
class), with pairs killed when some stabilizer element fixes the coset but
reverses the cell's orientation.  Boundary entries carry three signs: the
induced-orientation incidence sign of the facet inside its cell, the
ambient orientation character of the transporter, and the sign aligning
the target coset with its chosen class representative.

The ambient character of gamma is the orientation action on the symmetric
space: the product over real places of sign(det gamma)^(n-1); totally
imaginary fields contribute nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .fieldcat import NumberField
from . import forms, isometry, perfect
from .cells import CellComplexData, CellOrbit, KoecherCell
from .cosets import CosetSpace, Point
from .forms import canonical_ray
from .sparse import SparseIntMatrix

KILLED = -1


def ambient_character(nf: NumberField, n: int, gamma) -> int:
    """Orientation character of gamma on the symmetric space."""
    if nf.r == 0:
        return 1
    if (n - 1) % 2 == 0:
        return 1
    det = isometry.f_det(nf, gamma)
    sign = 1
    embs = nf.embed(det)
    for v in range(nf.r):
        if embs[v] < 0:
            sign = -sign
    return sign


def _reduced_coords(eval_rows) -> List[List[Fraction]]:
    """Injective coordinates for the ray span (pivot-column projection)."""
    k = len(eval_rows)
    ncols = len(eval_rows[0])
    mat = [list(map(Fraction, r)) for r in eval_rows]
    work = [list(r) for r in mat]
    pivots = []
    row = 0
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
    return [[mat[j][p] for p in pivots] for j in range(k)]


def _det_sign(rows) -> int:
    m = len(rows)
    a = [list(map(Fraction, r)) for r in rows]
    sign = 1
    for col in range(m):
        piv = next((i for i in range(col, m) if a[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        if a[col][col] < 0:
            sign = -sign
        inv = Fraction(1) / a[col][col]
        for i in range(col + 1, m):
            if a[i][col]:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return sign


class OrientedOrbit:
    """A cell orbit with reference orientation and character data."""

    def __init__(self, orbit: CellOrbit):
        self.orbit = orbit
        cell = orbit.cell
        self.cell = cell
        self.eval_rows = perfect._eval_matrix(cell.field, cell.n,
                                              cell.vectors)
        self.red = _reduced_coords(self.eval_rows)
        self.rank = orbit.rank
        self.ray_index = {v: i for i, v in enumerate(cell.vectors)}
        # reference basis: first rank-many rays with independent coords
        self.basis: List[int] = []
        taken: List[List[Fraction]] = []
        for i, r in enumerate(self.red):
            if forms.rational_rank(taken + [r]) > len(taken):
                taken.append(r)
                self.basis.append(i)
                if len(self.basis) == self.rank:
                    break
        self.basis_sign = _det_sign([self.red[b] for b in self.basis])
        assert self.basis_sign != 0

    def ray_permutation(self, gamma) -> List[int]:
        """Index permutation induced by gamma (must stabilize the cell)."""
        nf = self.cell.field
        out = []
        for v in self.cell.vectors:
            w = forms.apply_gamma(nf, gamma, forms.ovector(nf, v))
            img = canonical_ray(nf, forms.flatten(w))
            if img not in self.ray_index:
                raise ValueError("gamma does not stabilize the cell")
            out.append(self.ray_index[img])
        return out

    def geometric_character(self, gamma) -> int:
        """Sign of det of gamma's action on the cell's span."""
        perm = self.ray_permutation(gamma)
        rows = [self.red[perm[b]] for b in self.basis]
        s = _det_sign(rows)
        assert s != 0
        return s * self.basis_sign

    def total_character(self, gamma) -> int:
        nf = self.cell.field
        return (self.geometric_character(gamma)
                * ambient_character(nf, self.cell.n, gamma))


@dataclass
class Generator:
    orbit_index: int
    coset: Point


@dataclass
class VoronoiComplex:
    field: NumberField
    n: int
    level_hnf: str
    generators: Dict[int, List[Generator]]      # Voronoi degree -> gens
    boundaries: Dict[int, SparseIntMatrix]      # d_k : V_k -> V_{k-1}

    def degrees(self) -> List[int]:
        return sorted(self.generators)

    def generator_count(self, k: int) -> int:
        return len(self.generators.get(k, []))


class _OrbitCosetTable:
    """Fusion of coset points under a cell stabilizer, with signs."""

    def __init__(self, oo: OrientedOrbit, cosets: CosetSpace):
        self.reps: List[Point] = []
        # point -> (generator index within this orbit or KILLED, sign)
        self.classify: Dict[Point, Tuple[int, int]] = {}
        chars = [(s, oo.total_character(s))
                 for s in oo.orbit.stabilizer_elements]
        seen = set()
        for start in cosets.points:
            if start in seen:
                continue
            comp: Dict[Point, int] = {start: 1}
            queue = [start]
            killed = False
            while queue:
                v = queue.pop()
                for s, ch in chars:
                    u = cosets.act(v, s)
                    us = comp[v] * ch
                    if u not in comp:
                        comp[u] = us
                        queue.append(u)
                    elif comp[u] != us:
                        killed = True
            seen.update(comp)
            if killed:
                for v in comp:
                    self.classify[v] = (KILLED, 0)
            else:
                idx = len(self.reps)
                self.reps.append(min(comp))
                base_sign = comp[min(comp)]
                for v, sg in comp.items():
                    self.classify[v] = (idx, sg * base_sign)


def incidence_sign(oo: OrientedOrbit, facet_cell: KoecherCell,
                   tau: OrientedOrbit, gamma) -> int:
    """Sign of the facet slot: push tau's reference orientation through
    gamma into the facet, append an interior point of the big cell, and
    compare with the big cell's reference orientation."""
    nf = oo.cell.field
    rows = []
    for b in tau.basis:
        w = forms.apply_gamma(nf, gamma,
                              forms.ovector(nf, tau.cell.vectors[b]))
        img = canonical_ray(nf, forms.flatten(w))
        rows.append(oo.red[oo.ray_index[img]])
    interior = [sum(col) for col in zip(*oo.red)]
    rows.append(interior)
    s = _det_sign(rows)
    assert s != 0, "degenerate facet frame"
    return s * oo.basis_sign


def assemble_complex(fan: CellComplexData, cosets: CosetSpace
                     ) -> VoronoiComplex:
    """Build generators and boundary matrices; verifies d.d = 0."""
    nf = fan.field
    n = fan.n
    oriented: Dict[int, List[OrientedOrbit]] = {
        r: [OrientedOrbit(o) for o in orbs]
        for r, orbs in fan.strata.items()}
    tables: Dict[int, List[_OrbitCosetTable]] = {
        r: [_OrbitCosetTable(oo, cosets) for oo in oos]
        for r, oos in oriented.items()}

    generators: Dict[int, List[Generator]] = {}
    offsets: Dict[int, List[int]] = {}
    for r in sorted(oriented):
        k = r - 1
        gens: List[Generator] = []
        offs = []
        for oi, tab in enumerate(tables[r]):
            offs.append(len(gens))
            gens.extend(Generator(oi, rep) for rep in tab.reps)
        generators[k] = gens
        offsets[k] = offs

    boundaries: Dict[int, SparseIntMatrix] = {}
    for r in sorted(oriented):
        k = r - 1
        ncols = len(generators[k])
        nrows = len(generators.get(k - 1, []))
        d = SparseIntMatrix(nrows, ncols)
        if r - 1 in oriented:
            for oi, oo in enumerate(oriented[r]):
                slots = []
                for fcell, ti, gamma in oo.orbit.facets:
                    tau = oriented[r - 1][ti]
                    eps = (incidence_sign(oo, fcell, tau, gamma)
                           * ambient_character(nf, n, gamma))
                    slots.append((ti, gamma, eps))
                tab = tables[r][oi]
                for gi, rep in enumerate(tab.reps):
                    col = offsets[k][oi] + gi
                    for ti, gamma, eps in slots:
                        target = cosets.act(rep, gamma)
                        tidx, tsign = tables[r - 1][ti].classify[target]
                        if tidx == KILLED:
                            continue
                        row = offsets[k - 1][ti] + tidx
                        d.add_at(row, col, eps * tsign)
        boundaries[k] = d

    # the d.d = 0 gate
    degs = sorted(generators)
    for k in degs:
        if k - 1 in boundaries and boundaries[k].rows:
            prod = boundaries[k - 1].mul(boundaries[k])
            if not prod.is_zero():
                raise AssertionError(
                    f"boundary composition nonzero in degree {k}")
    return VoronoiComplex(nf, n, cosets.level.hnf_string(),
                          generators, boundaries)


def voronoi_homology(complex_: VoronoiComplex, degree: int
                     ):
    """(betti, torsion divisors) of H_degree of the complex."""
    from .snf import homology_of_pair, ElementaryDivisors
    gens = complex_.generator_count(degree)
    if gens == 0:
        return 0, ElementaryDivisors(0, ())
    d_k = complex_.boundaries.get(degree)
    if d_k is None:
        d_k = SparseIntMatrix(0, gens)
    d_k1 = complex_.boundaries.get(degree + 1)
    if d_k1 is None:
        d_k1 = SparseIntMatrix(gens, 0)
    return homology_of_pair(d_k, d_k1)
