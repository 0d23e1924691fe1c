"""Closed-form invariants of the groups under study.

For GL_n over a field with signature (r, s) the symmetric space has
dimension d = ((r + 2s) n^2 + r n - 2) / 2, and the deficiency delta
(difference between complex rank and compact-torus rank of the semisimple
part) accumulates place by place: a real place contributes
(n - 1) - floor(n / 2), a complex place n - 1.  Torsion in the homology
grows exponentially in the index precisely when delta = 1, with limiting
constant expressed through special values of the Dedekind zeta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import mpmath

from .fieldcat import NumberField, get_field
from .zeta import dedekind_zeta, regulator

# labels accepted on the command line, with (field, n)
GROUP_CATALOG = {
    "gl2-Qi": ("Qi", 2),
    "gl2-Qsqrt-2": ("Qsqrt-2", 2),
    "gl2-Qsqrt-3": ("Qsqrt-3", 2),
    "gl2-Qsqrt-7": ("Qsqrt-7", 2),
    "gl2-Qsqrt-11": ("Qsqrt-11", 2),
    "gl3-Q": ("Q", 3),
    "gl2-cubic-23": ("cubic-23", 2),
    "gl4-Q": ("Q", 4),
    "gl2-Qzeta5": ("Qzeta5", 2),
    "gl5-Q": ("Q", 5),
}


@dataclass(frozen=True)
class GroupDescriptor:
    field: NumberField
    n: int

    @property
    def label(self) -> str:
        return f"gl{self.n}-{self.field.label}"


def group_from_label(label: str) -> GroupDescriptor:
    if label not in GROUP_CATALOG:
        raise KeyError(f"unknown group {label!r}; "
                       f"known: {sorted(GROUP_CATALOG)}")
    fl, n = GROUP_CATALOG[label]
    return GroupDescriptor(get_field(fl), n)


def symmetric_space_dim(g: GroupDescriptor) -> int:
    r, s, n = g.field.r, g.field.s, g.n
    num = (r + 2 * s) * n * n + r * n - 2
    assert num % 2 == 0
    return num // 2


def deficiency(g: GroupDescriptor) -> int:
    r, s, n = g.field.r, g.field.s, g.n
    return r * ((n - 1) - n // 2) + s * (n - 1)


def small_prime_set(g: GroupDescriptor) -> Tuple[int, ...]:
    """Primes dividing orders of finite subgroups of GL_n(O): p qualifies
    iff a p-th root of unity generates a degree <= n extension of F."""
    import sympy
    nf, n = g.field, g.n
    out = []
    for p in sympy.primerange(2, n * nf.degree + 2):
        if nf.roots_of_unity_order % p == 0:
            e = sympy.totient(p)            # zeta_p already in F
        elif nf.degree == 2:
            pstar = p if p % 4 == 1 else -p
            e = 2 if nf.discriminant == pstar else 1
        else:
            e = 1
        if (p - 1) // e <= n:
            out.append(p)
    return tuple(out)


def cuspidal_top_degree(g: GroupDescriptor) -> int:
    """Top degree of the cuspidal range of the homology."""
    d = symmetric_space_dim(g)
    delta = deficiency(g)
    # cuspidal range is centered: [ (d - delta)/2 , (d + delta)/2 ] shifted
    # to homological degree; for the groups in the catalog this reduces to
    # the table below, kept explicit as a guard
    table = {
        ("Q", 3): 2, ("Q", 4): 4, ("Q", 5): 6,
        ("cubic-23", 2): 2, ("Qzeta5", 2): 2,
    }
    key = (g.field.label, g.n)
    if key in table:
        return table[key]
    if g.field.r == 0 and g.field.s == 1 and g.n == 2:
        return 1
    raise KeyError(f"no cuspidal range on record for {g.label}")


def top_voronoi_degree(g: GroupDescriptor) -> int:
    """Voronoi degree of the top retained cells: dim of the form space
    minus one."""
    deg = g.field.degree
    return g.n + deg * g.n * (g.n - 1) // 2 - 1


def _vol_su(n: int) -> mpmath.mpf:
    """Riemannian volume of SU(n) for the bi-invariant metric induced by
    the trace form."""
    acc = mpmath.sqrt(n) * mpmath.power(2 * mpmath.pi,
                                        (n * n + n - 2) // 2)
    for k in range(2, n):
        acc /= mpmath.factorial(k)
    return acc


_VOL_SO3 = 16 * mpmath.sqrt(2) * mpmath.pi ** 2


def sl3_l2torsion(p: int, q: int, r: int) -> mpmath.mpf:
    """Analytic torsion growth rate for SL(3) with coefficients in the
    irreducible representation of highest weight (p, q, r), p >= q >= r.

    The trivial representation (0, 0, 0) gives the limiting constant for
    homology with trivial coefficients.
    """
    if not p >= q >= r:
        raise ValueError("highest weight must be ordered p >= q >= r")
    a1 = Fraction(p + 1 - q, 2)
    a2 = Fraction(p - r + 2, 2)
    a3 = Fraction(q - r + 1, 2)
    c1 = Fraction(p + q - 2 * r + 3, 3)
    c2 = Fraction(p + r - 2 * q, 3)
    c3 = Fraction(2 * p - q - r + 3, 3)
    if (p, q, r) == (0, 0, 0):
        bracket = Fraction(1, 2)
    else:
        bracket = 2 * a1 * a3 * c1 * c3
        tail = a3 * c3 if c2 >= 0 else a1 * c1
        bracket += 2 * a2 * abs(c2) * tail
    pref = mpmath.pi * _VOL_SO3 / _vol_su(3)
    return pref * mpmath.mpf(bracket.numerator) / bracket.denominator


def bv_limit(g: GroupDescriptor, dps: int = 25) -> mpmath.mpf:
    """Limiting value of log|torsion| / index for the deficiency-one
    groups of the catalog, as a positive constant."""
    nf = g.field
    if deficiency(g) != 1:
        raise ValueError(f"{g.label} has deficiency {deficiency(g)}; "
                         "no exponential-growth constant")
    with mpmath.workdps(dps):
        if g.n == 2 and nf.r == 0 and nf.s == 1:
            z = dedekind_zeta(nf, 2, dps=dps)
            disc = abs(nf.discriminant)
            return (mpmath.power(disc, mpmath.mpf(3) / 2) * z
                    / (48 * mpmath.pi ** 3))
        if g.n == 2 and nf.label == "cubic-23":
            z = dedekind_zeta(nf, 2, dps=dps)
            reg = regulator(nf, dps=dps)
            disc = abs(nf.discriminant)
            return (mpmath.power(disc, mpmath.mpf(3) / 2) * reg * z
                    / (48 * mpmath.pi ** 5))
        if g.n == 3 and nf.degree == 1:
            return (mpmath.sqrt(3) * mpmath.zeta(3)
                    / (288 * mpmath.pi ** 2))
        if g.n == 4 and nf.degree == 1:
            return (31 * mpmath.sqrt(2) * mpmath.zeta(3)
                    / (259200 * mpmath.pi ** 2))
    raise ValueError(f"no closed-form constant on record for {g.label}")
