"""Cell orbit decomposition of the fan, with stabilizers and incidence."""

import pytest

from voronoi_torsion import cells, isometry
from voronoi_torsion.cells import cell_complex, make_cell, stabilizer
from voronoi_torsion.fieldcat import get_field


def _stratum_profile(fan):
    return {r: sorted((o.cell.ray_count, len(o.stabilizer_elements))
                      for o in orbs)
            for r, orbs in fan.strata.items()}


def test_gl2_q_fan():
    fan = cell_complex(get_field("Q"), 2)
    assert _stratum_profile(fan) == {3: [(3, 12)], 2: [(2, 8)]}


def test_gl2_qi_fan():
    fan = cell_complex(get_field("Qi"), 2)
    assert _stratum_profile(fan) == {4: [(6, 96)], 3: [(3, 24)],
                                     2: [(2, 32)]}


def test_gl3_q_fan():
    # strata of GL3(Z): one orbit in cone ranks 6, 5, 3 and two in rank 4
    fan = cell_complex(get_field("Q"), 3)
    prof = _stratum_profile(fan)
    assert {r: len(v) for r, v in prof.items()} == {6: 1, 5: 1, 4: 2, 3: 1}
    assert prof[6] == [(6, 48)]
    assert prof[5] == [(5, 16)]
    assert sorted(s for _c, s in prof[4]) == [24, 48]
    assert prof[3] == [(3, 48)]


def test_facet_transporters_are_exact():
    """Each facet record (cell, orbit, gamma) satisfies gamma.rep = cell."""
    nf = get_field("Q")
    fan = cell_complex(nf, 2)
    for rank, orbs in fan.strata.items():
        for orb in orbs:
            for fcell, ti, gamma in orb.facets:
                rep = fan.strata[rank - 1][ti].cell
                from voronoi_torsion import forms
                imgs = [forms.flatten(forms.apply_gamma(
                    nf, gamma, forms.ovector(nf, v)))
                    for v in rep.vectors]
                assert make_cell(nf, 2, imgs).vectors == fcell.vectors


def test_stabilizers_are_groups():
    nf = get_field("Q")
    fan = cell_complex(nf, 2)
    for orbs in fan.strata.values():
        for orb in orbs:
            elems = orb.stabilizer_elements
            mats = {tuple(map(tuple, e)) for e in elems}
            ident = isometry.f_identity(nf, 2)
            assert tuple(map(tuple, ident)) in mats
            a, b = elems[0], elems[-1]
            prod = isometry.f_mat_mul(nf, a, b)
            assert tuple(map(tuple, prod)) in mats


def test_degrees_range():
    fan = cell_complex(get_field("Qsqrt-2"), 2)
    assert fan.degrees() == [1, 2, 3]
    assert fan.top_rank == 4
