"""P^{n-1}(O/n) coset spaces and the right group action."""

import random

import pytest

from voronoi_torsion.cosets import gamma0_cosets
from voronoi_torsion.fieldcat import get_field
from voronoi_torsion.ideals import ideal_from_hnf_string, principal


def _index_formula_q(n, N):
    """|P^{n-1}(Z/N)| from the multiplicative formula."""
    import sympy
    out = 1
    for p, e in sympy.factorint(N).items():
        out *= p ** ((n - 1) * (e - 1)) * (p ** n - 1) // (p - 1)
    return out


@pytest.mark.parametrize("n,N", [(2, 2), (2, 4), (2, 6), (2, 11), (2, 12),
                                 (3, 2), (3, 4), (3, 5), (3, 6)])
def test_index_over_q(n, N):
    nf = get_field("Q")
    cs = gamma0_cosets(nf, n, principal(nf, N))
    assert cs.index == _index_formula_q(n, N)


def test_level_one_is_a_point():
    nf = get_field("Qi")
    cs = gamma0_cosets(nf, 2, principal(nf, 1))
    assert cs.index == 1


@pytest.mark.parametrize("hnf,index", [
    ("1,1;0,2", 3),     # ramified (1+i)
    ("1,2;0,5", 6),     # split prime of norm 5
    ("3,0;0,3", 10),    # inert 3: P^1(F9)
    ("2,0;0,2", 6),     # (2) = (1+i)^2
])
def test_index_over_qi(hnf, index):
    nf = get_field("Qi")
    cs = gamma0_cosets(nf, 2, ideal_from_hnf_string(nf, hnf))
    assert cs.index == index


def test_fast_path_matches_bruteforce():
    """Over Q with prime-power level the normal-form path must agree with
    the generic unit-orbit enumeration."""
    nf = get_field("Q")
    for N in (4, 9, 8):
        cs = gamma0_cosets(nf, 2, principal(nf, N))
        assert cs._fast is not None
        brute = set()
        for a in range(N):
            for b in range(N):
                from math import gcd
                if gcd(gcd(a, b), N) == 1:
                    brute.add(cs.normalize(((a,), (b,))))
        assert brute == set(cs.points)


def test_action_is_bijective(rng):
    nf = get_field("Qi")
    cs = gamma0_cosets(nf, 2, principal(nf, 3))
    one, zero = nf.one(), nf.zero()
    mats = [
        ((zero, tuple(-x for x in one)), (one, zero)),      # S
        ((one, one), (zero, one)),                          # T
        ((one, nf.basis_element(1)), (zero, one)),          # T_i
    ]
    for gamma in mats:
        image = {cs.act(p, gamma) for p in cs.points}
        assert image == set(cs.points)


def test_action_is_right_action(rng):
    nf = get_field("Q")
    cs = gamma0_cosets(nf, 2, principal(nf, 12))
    one, zero = nf.one(), nf.zero()
    s = ((zero, tuple(-x for x in one)), (one, zero))
    t = ((one, one), (zero, one))
    st = ((zero, tuple(-x for x in one)), (one, one))  # s then t: v(st)
    for p in cs.points:
        assert cs.act(cs.act(p, s), t) == cs.act(p, st)


def test_normalize_idempotent():
    nf = get_field("Qsqrt-2")
    cs = gamma0_cosets(nf, 2, principal(nf, 3))
    for p in cs.points:
        assert cs.normalize(p) == p


def test_point_index_roundtrip():
    nf = get_field("Q")
    cs = gamma0_cosets(nf, 3, principal(nf, 4))
    for i, p in enumerate(cs.points):
        assert cs.point_index(p) == i
