"""P^{n-1}(O/n) as the coset space Gamma_0(n) \\ GL_n(O).

Points are bottom-row classes: unimodular rows over O/n up to unit
scalars.  The group acts on the right on row vectors, which keeps all the
state index-sized (never whole matrices).

Two representations coexist: a generic brute-force enumeration over the
residue ring (any field, small norm) and a normal-form fast path for
rational prime-power levels (first unit entry scaled to 1), which is what
the large reproduction runs use.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fieldcat import NumberField
from .ideals import OIdeal, ResidueRing, hnf_rows

Point = Tuple[Tuple[int, ...], ...]  # n residue-ring elements


class CosetSpace:
    """Normalized representatives of P^{n-1}(O/level)."""

    def __init__(self, nf: NumberField, n: int, level: OIdeal):
        if level.field.label != nf.label:
            raise ValueError("level ideal belongs to a different field")
        self.field = nf
        self.n = n
        self.level = level
        self.ring = ResidueRing(level)
        self._fast: Optional[Tuple[int, int]] = None  # (p, k) over Z
        if nf.degree == 1 and level.norm > 1:
            import sympy
            fac = sympy.factorint(level.norm)
            if len(fac) == 1:
                (p, k), = fac.items()
                self._fast = (p, int(k))
        self._units: Optional[List[Tuple[int, ...]]] = None
        self.points: List[Point] = self._enumerate()
        self._lookup: Dict[Point, int] = {pt: i
                                          for i, pt in enumerate(self.points)}

    @property
    def index(self) -> int:
        return len(self.points)

    # -- normalization --------------------------------------------------

    def _ring_units(self) -> List[Tuple[int, ...]]:
        if self._units is None:
            self._units = [a for a in self.ring.elements()
                           if self.ring.is_unit(a)]
        return self._units

    def _is_unimodular(self, row: Point) -> bool:
        """The entries generate the unit ideal together with the level."""
        nf = self.field
        d = nf.degree
        rows = [list(r) for r in self.level.basis]
        for e in row:
            ec = tuple(Fraction(x) for x in e)
            for j in range(d):
                prod = nf.mul(ec, nf.basis_element(j))
                rows.append([int(x) for x in prod])
        h, _ = hnf_rows(rows)
        det = 1
        for i in range(d):
            det *= h[i][i]
        return det == 1

    def normalize(self, row: Sequence[Sequence[int]]) -> Point:
        """Canonical representative of the unit-scalar class of the row."""
        if self.level.norm == 1:
            return tuple(self.ring.zero() for _ in range(self.n))
        row = tuple(self.ring.reduce(e) for e in row)
        if self._fast is not None:
            p, _k = self._fast
            npow = self.level.norm
            for i in range(self.n):
                v = row[i][0]
                if v % p:
                    inv = pow(v, -1, npow)
                    return tuple(((e[0] * inv) % npow,) for e in row)
            raise ValueError(f"row {row} is not unimodular mod the level")
        best = None
        for u in self._ring_units():
            cand = tuple(self.ring.mul(u, e) for e in row)
            if best is None or cand < best:
                best = cand
        return best

    # -- enumeration ----------------------------------------------------

    def _enumerate(self) -> List[Point]:
        if self.level.norm == 1:
            return [tuple(self.ring.zero() for _ in range(self.n))]
        if self._fast is not None:
            return self._enumerate_prime_power()
        pts = set()
        all_elements = list(self.ring.elements())
        for combo in itertools.product(all_elements, repeat=self.n):
            if self._is_unimodular(combo):
                pts.add(self.normalize(combo))
        return sorted(pts)

    def _enumerate_prime_power(self) -> List[Point]:
        p, _k = self._fast
        npow = self.level.norm
        nonunits = list(range(0, npow, p))
        out = []
        for i in range(self.n):
            # entries before the first unit are non-units, entry i is 1
            head = itertools.product(nonunits, repeat=i)
            tail_len = self.n - i - 1
            for h in head:
                for t in itertools.product(range(npow), repeat=tail_len):
                    out.append(tuple((x,) for x in h) + ((1,),)
                               + tuple((x,) for x in t))
        return sorted(out)

    # -- group action ---------------------------------------------------

    def act(self, point: Point, gamma) -> Point:
        """Right action: the class of (row * gamma), normalized."""
        nf = self.field
        out = []
        for j in range(self.n):
            acc = nf.zero()
            for i in range(self.n):
                vi = tuple(Fraction(x) for x in point[i])
                acc = nf.add(acc, nf.mul(vi, gamma[i][j]))
            out.append(self.ring.reduce([int(x) for x in acc]))
        return self.normalize(tuple(out))

    def point_index(self, point: Point) -> int:
        return self._lookup[point]


def gamma0_cosets(nf: NumberField, n: int, level: OIdeal) -> CosetSpace:
    return CosetSpace(nf, n, level)
