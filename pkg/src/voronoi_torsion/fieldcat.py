"""Static catalog of number fields and exact arithmetic in their rings of integers.

Elements are coordinate vectors over the integral basis, with Fraction
entries.  Every field in the catalog is monogenic and the catalog stores the
power basis of a monogenic generator as the integral basis, so Dedekind
factorization of primes applies everywhere.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import mpmath
import sympy


class FieldError(ValueError):
    """Bad field input (reducible polynomial, missing units, unknown label)."""


Coords = Tuple[Fraction, ...]


def _poly_mul_mod(a, b, poly):
    """Multiply polynomial coefficient vectors modulo the monic poly."""
    deg = len(poly) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    # reduce degree >= deg using x^deg = -(poly[:-1])
    for k in range(len(prod) - 1, deg - 1, -1):
        c = prod[k]
        if c:
            prod[k] = Fraction(0)
            for j in range(deg):
                prod[k - deg + j] -= c * poly[j]
    out = prod[:deg]
    out += [Fraction(0)] * (deg - len(out))
    return out


def _mat_inv(rows):
    """Exact inverse of a square matrix of Fractions (Gauss-Jordan)."""
    n = len(rows)
    a = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise FieldError("singular matrix has no inverse")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class NumberField:
    """A number field from the static catalog.

    Coordinates of elements are always with respect to `integral_basis`
    (which here equals the power basis of the defining polynomial's root).
    """

    label: str
    defining_polynomial: Tuple[int, ...]  # low -> high, monic
    degree: int
    r: int
    s: int
    discriminant: int
    integral_basis: Tuple[Coords, ...]    # power-basis coordinates
    fundamental_units: Tuple[Coords, ...]
    roots_of_unity_order: int
    torsion_generator: Coords
    conj_generator_image: Optional[Coords]  # power-basis coords, None if absent

    # -- element arithmetic (coords over the integral basis) ------------

    def zero(self) -> Coords:
        return tuple(Fraction(0) for _ in range(self.degree))

    def one(self) -> Coords:
        return self.from_rational(1)

    def from_rational(self, q) -> Coords:
        q = Fraction(q)
        return tuple([q] + [Fraction(0)] * (self.degree - 1))

    def generator(self) -> Coords:
        if self.degree == 1:
            return self.zero()
        return tuple(Fraction(1) if i == 1 else Fraction(0)
                     for i in range(self.degree))

    def add(self, a: Coords, b: Coords) -> Coords:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Coords, b: Coords) -> Coords:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Coords) -> Coords:
        return tuple(-x for x in a)

    def scal(self, q, a: Coords) -> Coords:
        q = Fraction(q)
        return tuple(q * x for x in a)

    def mul(self, a: Coords, b: Coords) -> Coords:
        poly = [Fraction(c) for c in self.defining_polynomial]
        return tuple(_poly_mul_mod(list(a), list(b), poly))

    def power(self, a: Coords, k: int) -> Coords:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def conj(self, a: Coords) -> Coords:
        """Apply the conjugation automorphism (identity for Q)."""
        if self.degree == 1:
            return a
        if self.conj_generator_image is None:
            raise FieldError(
                f"field {self.label} has no conjugation automorphism")
        img = self.conj_generator_image
        out = self.zero()
        pw = self.one()
        for c in a:
            out = self.add(out, self.scal(c, pw))
            pw = self.mul(pw, img)
        return out

    def has_conjugation(self) -> bool:
        return self.degree == 1 or self.conj_generator_image is not None

    def mult_matrix(self, a: Coords):
        """Integer-free matrix of multiplication by a, columns = a*basis."""
        return [self.mul(a, self.basis_element(j)) for j in range(self.degree)]

    def basis_element(self, j: int) -> Coords:
        return tuple(Fraction(1) if i == j else Fraction(0)
                     for i in range(self.degree))

    def trace(self, a: Coords) -> Fraction:
        cols = self.mult_matrix(a)
        return sum(cols[j][j] for j in range(self.degree))

    def norm(self, a: Coords) -> Fraction:
        cols = self.mult_matrix(a)
        return _det([[cols[j][i] for j in range(self.degree)]
                     for i in range(self.degree)])

    def inv(self, a: Coords) -> Coords:
        """Multiplicative inverse in F (solves the mult-matrix system)."""
        cols = self.mult_matrix(a)
        rows = [[cols[j][i] for j in range(self.degree)]
                for i in range(self.degree)]
        aug = _mat_inv(rows)
        return tuple(aug[i][0] for i in range(self.degree))

    def is_integral(self, a: Coords) -> bool:
        return all(x.denominator == 1 for x in a)

    def is_unit(self, a: Coords) -> bool:
        return self.is_integral(a) and abs(self.norm(a)) == 1

    def roots_of_unity(self):
        """All roots of unity, as a list of coordinate tuples."""
        g = self.torsion_generator
        out = [self.one()]
        cur = g
        while cur != out[0]:
            out.append(cur)
            cur = self.mul(cur, g)
        assert len(out) == self.roots_of_unity_order
        return out

    # -- archimedean data ----------------------------------------------

    def embeddings(self, dps: int = 30):
        """The r real embeddings then s complex ones (one per pair), as
        values of the generator."""
        with mpmath.workdps(dps + 10):
            if self.degree == 1:
                return [mpmath.mpf(0)]
            coeffs = [mpmath.mpf(c) for c in self.defining_polynomial]
            roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200,
                                     extraprec=120)
            real = sorted([r.real for r in roots if abs(r.imag) < 1e-20])
            cplx = sorted([r for r in roots if r.imag > 1e-20],
                          key=lambda z: (z.real, z.imag))
            assert len(real) == self.r and len(cplx) == self.s
            return list(real) + cplx

    def embed(self, a: Coords, dps: int = 30):
        """Values of the element under the r+s embeddings."""
        embs = self.embeddings(dps)
        out = []
        with mpmath.workdps(dps + 10):
            for th in embs:
                out.append(mpmath.polyval(list(reversed([mpmath.mpf(x.numerator) / x.denominator
                                                         for x in a])), th))
        return out


def _det(rows):
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = Fraction(1) / a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def signature(poly: Sequence[int]) -> Tuple[int, int]:
    """(real roots, complex-conjugate pairs) of a monic irreducible poly."""
    if poly[-1] != 1:
        raise FieldError("defining polynomial must be monic")
    x = sympy.Symbol("x")
    p = sympy.Poly(list(reversed(list(poly))), x)
    if p.degree() == 1:
        return (1, 0)
    if not p.is_irreducible:
        raise FieldError("defining polynomial must be irreducible over Q")
    nreal = len(p.real_roots())
    deg = p.degree()
    assert (deg - nreal) % 2 == 0
    return (nreal, (deg - nreal) // 2)


def _parse_coords(txt: str, deg: int) -> Coords:
    parts = [t for t in txt.split(",") if t.strip() != ""]
    out = [Fraction(t.strip()) for t in parts]
    out += [Fraction(0)] * (deg - len(out))
    return tuple(out)


@lru_cache(maxsize=1)
def load_catalog():
    """Parse the shipped field catalog into NumberField objects."""
    text = (importlib.resources.files("voronoi_torsion") / "data" /
            "fields.txt").read_text()
    records = []
    cur = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#"):
            continue
        if not line:
            if cur:
                records.append(cur)
                cur = {}
            continue
        key, _, val = line.partition(":")
        cur[key.strip()] = val.strip()
    if cur:
        records.append(cur)

    fields = {}
    for rec in records:
        poly = tuple(int(t) for t in rec["poly"].split(","))
        deg = len(poly) - 1
        r, s = int(rec["r"]), int(rec["s"])
        rr, ss = signature(poly)
        if (rr, ss) != (r, s):
            raise FieldError(f"catalog signature mismatch for {rec['label']}")
        basis = tuple(_parse_coords(row, deg)
                      for row in rec["basis"].split(";"))
        units = tuple(_parse_coords(row, deg)
                      for row in rec.get("units", "").split(";")
                      if row.strip())
        conj_txt = rec["conj"]
        conj = None if conj_txt == "none" else _parse_coords(conj_txt, deg)
        nf = NumberField(
            label=rec["label"],
            defining_polynomial=poly,
            degree=deg,
            r=r,
            s=s,
            discriminant=int(rec["disc"]),
            integral_basis=basis,
            fundamental_units=units,
            roots_of_unity_order=int(rec["torsion"]),
            torsion_generator=_parse_coords(rec["torgen"], deg),
            conj_generator_image=conj,
        )
        if len(units) != max(r + s - 1, 0):
            raise FieldError(f"unit rank mismatch for {nf.label}")
        fields[nf.label] = nf
    return fields


def get_field(label: str) -> NumberField:
    cat = load_catalog()
    if label not in cat:
        raise FieldError(f"unknown field label {label!r}; "
                         f"known: {sorted(cat)}")
    return cat[label]


def basis_discriminant(nf: NumberField) -> Fraction:
    """det of the trace-pairing Gram of the integral basis."""
    n = nf.degree
    gram = [[nf.trace(nf.mul(nf.basis_element(i), nf.basis_element(j)))
             for j in range(n)] for i in range(n)]
    return _det(gram)
