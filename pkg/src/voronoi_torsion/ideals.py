"""Ideals of the ring of integers in HNF, residue rings, factorization.

An ideal is stored by a Z-basis inside the fixed integral basis, kept in
row-style Hermite normal form: upper triangular with positive diagonal and
entries above each pivot reduced.  Equality of ideals is equality of HNF
matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import sympy

from .fieldcat import Coords, FieldError, NumberField


# ---------------------------------------------------------------------------
# integer matrix utilities (rows = generators)

def hnf_rows(mat: Sequence[Sequence[int]]):
    """Row HNF of an integer matrix.

    Returns (H, U) with U unimodular, U*mat = H, H upper echelon with
    positive pivots and reduced entries above pivots; zero rows at the
    bottom.
    """
    m = len(mat)
    ncols = len(mat[0]) if m else 0
    a = [list(map(int, row)) for row in mat]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        u[row], u[piv] = u[piv], u[row]
        # clear below via euclidean steps
        while True:
            nz = [i for i in range(row + 1, m) if a[i][col]]
            if not nz:
                break
            # pick the nonzero entry of least magnitude (including the pivot)
            best = min(nz + [row], key=lambda i: abs(a[i][col]))
            if best != row:
                a[row], a[best] = a[best], a[row]
                u[row], u[best] = u[best], u[row]
            for i in nz:
                if i == row or not a[i][col]:
                    continue
                q = a[i][col] // a[row][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        for i in range(row):
            q = a[i][col] // a[row][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
        if row == m:
            break
    return a, u


def solve_integer(a_rows: Sequence[Sequence[int]], b: Sequence[int]
                  ) -> Optional[List[int]]:
    """An integer solution z of A z = b (columns of A indexed by z), or None.

    A is given as a list of rows.  Works through the row HNF of A^T.
    """
    m = len(a_rows)
    if m == 0:
        return [] if not any(b) else None
    ncols = len(a_rows[0])
    at = [[a_rows[i][j] for i in range(m)] for j in range(ncols)]
    h, u = hnf_rows(at)  # u * A^T = h
    # solve w * h = b, then z = w * u
    w = [0] * ncols
    b = list(b)
    used = set()
    for r in range(ncols):
        piv = next((c for c in range(m) if h[r][c]), None)
        if piv is None:
            break
        if b[piv] % h[r][piv]:
            return None
        w[r] = b[piv] // h[r][piv]
        if w[r]:
            for c in range(m):
                b[c] -= w[r] * h[r][c]
        used.add(piv)
    if any(b):
        return None
    return [sum(w[r] * u[r][j] for r in range(ncols)) for j in range(ncols)]


def _coords_int(v: Coords) -> Tuple[int, ...]:
    out = []
    for x in v:
        if x.denominator != 1:
            raise FieldError("expected an integral element")
        out.append(x.numerator)
    return tuple(out)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OIdeal:
    """Nonzero ideal of O in HNF with respect to the integral basis."""

    field: NumberField
    basis: Tuple[Tuple[int, ...], ...]  # d x d, upper triangular, HNF

    def __post_init__(self):
        d = self.field.degree
        assert len(self.basis) == d
        for i, row in enumerate(self.basis):
            assert len(row) == d
            assert row[i] > 0
            assert all(row[j] == 0 for j in range(i))

    @property
    def norm(self) -> int:
        n = 1
        for i in range(len(self.basis)):
            n *= self.basis[i][i]
        return n

    def is_whole_ring(self) -> bool:
        return self.norm == 1

    # -- membership and reduction --------------------------------------

    def reduce(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Canonical representative of v modulo the ideal lattice."""
        out = list(map(int, v))
        for i in range(len(out)):
            q = out[i] // self.basis[i][i]
            if q:
                for j in range(i, len(out)):
                    out[j] -= q * self.basis[i][j]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_ideal(self, other: "OIdeal") -> bool:
        return all(self.contains(row) for row in other.basis)

    def hnf_string(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.basis)

    def __le__(self, other: "OIdeal") -> bool:  # divisibility: other | self
        return other.contains_ideal(self)


def from_z_generators(nf: NumberField, gens: Sequence[Sequence[int]]) -> OIdeal:
    """Ideal (as a Z-module) spanned by the given integer coordinate rows.

    The caller is responsible for the span being an ideal (closed under
    multiplication by O); use `ideal_from_generators` for ideal closure.
    """
    h, _ = hnf_rows(list(gens))
    d = nf.degree
    rows = [tuple(r) for r in h if any(r)]
    if len(rows) != d:
        raise FieldError("generators span a module of non-full rank")
    return OIdeal(nf, tuple(rows))


def ideal_from_generators(nf: NumberField, gens: Sequence[Coords]) -> OIdeal:
    """The O-ideal generated by the given integral field elements."""
    rows = []
    for g in gens:
        _coords_int(g)
        for j in range(nf.degree):
            prod = nf.mul(g, nf.basis_element(j))
            rows.append(list(_coords_int(prod)))
    if not rows or not any(any(r) for r in rows):
        raise FieldError("the zero ideal is not supported")
    return from_z_generators(nf, rows)


def principal(nf: NumberField, a) -> OIdeal:
    """Principal ideal (a); a may be a rational integer or element coords."""
    if isinstance(a, (int,)):
        a = nf.from_rational(a)
    return ideal_from_generators(nf, [a])


def whole_ring(nf: NumberField) -> OIdeal:
    return principal(nf, 1)


def ideal_from_hnf_string(nf: NumberField, text: str) -> OIdeal:
    """Inverse of OIdeal.hnf_string ("a,b;c,d" row encoding)."""
    rows = [tuple(int(x) for x in row.split(","))
            for row in text.split(";")]
    return OIdeal(nf, tuple(rows))


def ideal_mul(i: OIdeal, j: OIdeal) -> OIdeal:
    nf = i.field
    rows = []
    for a in i.basis:
        ca = tuple(Fraction(x) for x in a)
        for b in j.basis:
            cb = tuple(Fraction(x) for x in b)
            rows.append(list(_coords_int(nf.mul(ca, cb))))
    return from_z_generators(nf, rows)


def ideal_pow(i: OIdeal, k: int) -> OIdeal:
    out = whole_ring(i.field)
    for _ in range(k):
        out = ideal_mul(out, i)
    return out


# ---------------------------------------------------------------------------
# prime ideals and factorization

def primes_above(nf: NumberField, p: int) -> List[Tuple[OIdeal, int, int]]:
    """Prime ideals above the rational prime p as (ideal, residue_degree, e).

    Valid because every catalog field is monogenic: factor the defining
    polynomial mod p.
    """
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(list(nf.defining_polynomial))), x,
                      modulus=p, symmetric=False)
    out = []
    for fac, e in poly.factor_list()[1]:
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        g_theta = nf.zero()
        pw = nf.one()
        for c in coeffs:
            g_theta = nf.add(g_theta, nf.scal(c, pw))
            pw = nf.mul(pw, nf.generator())
        ideal = ideal_from_generators(
            nf, [nf.from_rational(p), g_theta])
        out.append((ideal, fac.degree(), e))
    assert sum(f * e for _, f, e in out) == nf.degree
    return out


def valuation(ideal: OIdeal, prime: OIdeal, bound: int) -> int:
    """v_prime(ideal) via containment in powers of the prime."""
    v = 0
    pk = whole_ring(ideal.field)
    while v < bound:
        pk = ideal_mul(pk, prime)
        if not pk.contains_ideal(ideal):
            return v
        v += 1
    return v


def ideal_factor(level: OIdeal) -> List[Tuple[OIdeal, int]]:
    """Prime factorization of a nonzero ideal, sorted by (norm, hnf)."""
    nf = level.field
    n = level.norm
    if n == 1:
        return []
    out = []
    for p, mult in sorted(sympy.factorint(n).items()):
        for prime, f, e in primes_above(nf, p):
            v = valuation(level, prime, bound=e * mult)
            if v:
                out.append((prime, v))
    check = 1
    for prime, v in out:
        check *= prime.norm ** v
    assert check == n, "factorization norm mismatch"
    out.sort(key=lambda t: (t[0].norm, t[0].basis))
    return out


def is_prime_ideal(level: OIdeal) -> bool:
    fac = ideal_factor(level)
    return len(fac) == 1 and fac[0][1] == 1 and fac[0][0].basis == level.basis


def enumerate_levels(nf: NumberField, min_norm: int, max_norm: int
                     ) -> List[OIdeal]:
    """All ideals with min_norm <= norm <= max_norm, ordered by
    (norm, HNF basis).  HNF is a canonical form, so unit multiples coincide.
    """
    if max_norm < 1:
        return []
    primes = []
    for p in sympy.primerange(2, max_norm + 1):
        for prime, f, _ in primes_above(nf, p):
            if prime.norm <= max_norm:
                primes.append(prime)
    found = {}

    def rec(idx: int, cur: OIdeal):
        found.setdefault((cur.norm, cur.basis), cur)
        for i in range(idx, len(primes)):
            nxt = ideal_mul(cur, primes[i])
            if nxt.norm <= max_norm:
                rec(i, nxt)

    rec(0, whole_ring(nf))
    out = [v for (n, _), v in sorted(found.items()) if n >= max(min_norm, 1)]
    return out


# ---------------------------------------------------------------------------

class ResidueRing:
    """The quotient O/I with canonical coordinate representatives."""

    def __init__(self, modulus: OIdeal):
        self.modulus = modulus
        self.field = modulus.field

    @property
    def cardinality(self) -> int:
        return self.modulus.norm

    def reduce(self, v: Sequence[int]) -> Tuple[int, ...]:
        return self.modulus.reduce(v)

    def zero(self) -> Tuple[int, ...]:
        return tuple(0 for _ in range(self.field.degree))

    def one(self) -> Tuple[int, ...]:
        return self.reduce(_coords_int(self.field.one()))

    def add(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.reduce([-x for x in a])

    def mul(self, a, b):
        nf = self.field
        prod = nf.mul(tuple(Fraction(x) for x in a),
                      tuple(Fraction(x) for x in b))
        return self.reduce(_coords_int(prod))

    def elements(self) -> Iterator[Tuple[int, ...]]:
        ranges = [range(self.modulus.basis[i][i])
                  for i in range(self.field.degree)]
        for v in itertools.product(*ranges):
            yield self.reduce(v)

    def inverse(self, a) -> Optional[Tuple[int, ...]]:
        """Multiplicative inverse of a mod I, or None if a is not a unit."""
        nf = self.field
        d = nf.degree
        acoords = tuple(Fraction(x) for x in a)
        # columns: x_j coefficients of a * e_j, then the ideal basis rows
        cols = []
        for j in range(d):
            cols.append(list(_coords_int(nf.mul(acoords, nf.basis_element(j)))))
        for row in self.modulus.basis:
            cols.append(list(row))
        a_rows = [[cols[c][r] for c in range(len(cols))] for r in range(d)]
        target = list(_coords_int(nf.one()))
        z = solve_integer(a_rows, target)
        if z is None:
            return None
        return self.reduce(z[:d])

    def is_unit(self, a) -> bool:
        return self.inverse(a) is not None
