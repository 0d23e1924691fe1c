"""Ideal arithmetic: HNF, factorization, residue rings, level lists."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voronoi_torsion.fieldcat import get_field
from voronoi_torsion.ideals import (OIdeal, ResidueRing, enumerate_levels,
                                    hnf_rows, ideal_factor,
                                    ideal_from_generators,
                                    ideal_from_hnf_string, ideal_mul,
                                    is_prime_ideal, primes_above, principal,
                                    solve_integer, whole_ring)

int_matrix = st.lists(
    st.lists(st.integers(-30, 30), min_size=3, max_size=3),
    min_size=2, max_size=5)


@given(rows=int_matrix)
@settings(max_examples=80, deadline=None)
def test_hnf_transform_is_exact(rows):
    h, u = hnf_rows(rows)
    assert len(u) == len(rows)
    for i in range(len(rows)):
        recomputed = [sum(u[i][k] * rows[k][j] for k in range(len(rows)))
                      for j in range(3)]
        assert recomputed == list(h[i])
    # echelon shape: pivot columns strictly increase
    pivots = [next((j for j, x in enumerate(r) if x), None) for r in h]
    nz = [p for p in pivots if p is not None]
    assert nz == sorted(nz) and len(set(nz)) == len(nz)


def test_solve_integer():
    a = [[2, 0], [1, 3]]
    assert solve_integer(a, [2, 4]) == [1, 1]
    assert solve_integer(a, [1, 0]) is None


@pytest.mark.parametrize("label,p,expected_norms", [
    ("Qi", 5, [5, 5]),        # split
    ("Qi", 3, [9]),           # inert
    ("Qi", 2, [2]),           # ramified
    ("Qsqrt-5", 2, [2]),
    ("Qzeta5", 5, [5]),
    ("cubic-23", 23, [23, 23]),
])
def test_primes_above(label, p, expected_norms):
    nf = get_field(label)
    primes = primes_above(nf, p)
    assert sorted(q.norm for q, _f, _e in primes) == sorted(expected_norms)
    # ramification bookkeeping: sum of e*f equals the field degree
    assert sum(e * f for _q, f, e in primes) == nf.degree
    for q, _f, _e in primes:
        assert is_prime_ideal(q)
        assert q.contains(nf_int(nf, p))


def nf_int(nf, k):
    return [k] + [0] * (nf.degree - 1)


@pytest.mark.parametrize("label", ["Q", "Qi", "Qsqrt-5", "cubic-23"])
def test_factor_multiplies_back(label):
    nf = get_field(label)
    for n in (6, 12, 30):
        lev = principal(nf, n)
        fac = ideal_factor(lev)
        acc = whole_ring(nf)
        for q, e in fac:
            for _ in range(e):
                acc = ideal_mul(acc, q)
        assert acc.basis == lev.basis


def test_norm_multiplicative_on_products():
    nf = get_field("Qi")
    a = principal(nf, 3)
    (b, _f, _e), = primes_above(nf, 2)
    ab = ideal_mul(a, b)
    assert ab.norm == a.norm * b.norm


def test_enumerate_levels_q():
    nf = get_field("Q")
    levs = enumerate_levels(nf, 1, 10)
    assert [l.norm for l in levs] == list(range(1, 11))


def test_enumerate_levels_qi_counts():
    nf = get_field("Qi")
    by_norm = {}
    for l in enumerate_levels(nf, 1, 25):
        by_norm.setdefault(l.norm, 0)
        by_norm[l.norm] += 1
    # split primes give two ideals, inert squares one, ramified one
    assert by_norm[5] == 2 and by_norm[13] == 2 and by_norm[25] == 3
    assert by_norm[2] == 1 and by_norm[9] == 1
    assert 3 not in by_norm and 7 not in by_norm  # inert: no norm-p ideal


def test_hnf_string_roundtrip():
    nf = get_field("Qsqrt-6")
    for l in enumerate_levels(nf, 2, 30):
        assert ideal_from_hnf_string(nf, l.hnf_string()).basis == l.basis


def test_residue_ring_size_and_units():
    nf = get_field("Qi")
    ring = ResidueRing(principal(nf, 5))
    elements = list(ring.elements())
    assert len(elements) == 25
    units = [a for a in elements if ring.is_unit(a)]
    assert len(units) == 16  # (Z[i]/5)* for split 5: (F5* )^2
    for u in units[:5]:
        inv = ring.inverse(u)
        assert ring.mul(u, inv) == ring.reduce(nf_int(nf, 1))


def test_residue_ring_reduce_idempotent():
    nf = get_field("Qsqrt-2")
    ring = ResidueRing(principal(nf, 6))
    for a in list(ring.elements())[:40]:
        assert ring.reduce(a) == a


def test_ideal_from_generators_closure():
    nf = get_field("Qsqrt-5")
    # the non-principal ideal (2, 1 + sqrt(-5)) has norm 2
    gen2 = tuple(Fraction(x) for x in (2, 0))
    gen1p = tuple(Fraction(x) for x in (1, 1))
    p2 = ideal_from_generators(nf, [gen2, gen1p])
    assert p2.norm == 2
    assert is_prime_ideal(p2)
