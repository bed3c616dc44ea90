from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcolor.coloring import (UNCOLORED, ColorBudget, Coloring, PropertyRCertificate, color_ipg3,
                              incident_color_count, lower_bound, target_chromatic_index, verify_coloring,
                              verify_parallelism_coloring, verify_property_r)
from pgcolor.spreads import search_parallelism

from conftest import space


def test_targets():
    assert target_chromatic_index(3, 2) == 7
    assert target_chromatic_index(4, 2) == 18
    assert target_chromatic_index(4, 3) == 44
    assert target_chromatic_index(5, 3) == 121
    assert target_chromatic_index(6, 2) == 66
    assert target_chromatic_index(2, 3) == 13
    assert target_chromatic_index(1, 5) == 1


def test_lower_bounds():
    assert lower_bound(4, 2) == 18  # 155 lines, partial spreads of at most 9
    assert lower_bound(4, 3) == 44  # ceil(1210 / 28)
    assert lower_bound(6, 2) == 66
    for n, q in [(3, 2), (3, 3), (5, 2)]:
        assert lower_bound(n, q) == target_chromatic_index(n, q)


@pytest.mark.parametrize("n,q", [(5, 2), (5, 3), (7, 2), (6, 2), (7, 3), (9, 2)])
def test_budget_audit(n, q):
    b = ColorBudget(n, q)
    assert b.audit()
    assert b.groups * b.c1 + b.c2 == b.total
    assert b.split(b.groups - 1, q)[-1] == b.groups * b.c1 - 1
    js = b.to_json()
    assert js["Cstar"][1] == b.total


def test_ipg3_from_parallelism():
    s = space(3, 3)
    par = search_parallelism(s).solution
    full, cert = color_ipg3(s, par, 0)
    assert verify_coloring(s, full)
    assert verify_parallelism_coloring(s, full)
    assert verify_property_r(cert)
    assert len(cert.incident) == incident_color_count(3, 3) == 12


def test_clash_reported_with_witness():
    s = space(3, 2)
    par = search_parallelism(s).solution
    col = Coloring.from_classes(s, par)
    lid = int(par[0][0])
    col.colors[lid] = 1
    v = verify_coloring(s, col)
    assert not v
    a, b = v.details["lines"]
    assert col.colors[a] == col.colors[b] == 1
    assert np.intersect1d(s.line_points[a], s.line_points[b]).tolist() == [v.details["point"]]


def test_uncolored_and_palette_errors():
    s = space(3, 2)
    col = Coloring.empty(s, 15)
    assert "uncolored" in verify_coloring(s, col).message
    col.colors[:] = 20
    assert not verify_coloring(s, col)


def test_domain_restriction():
    s = space(3, 2)
    col = Coloring.empty(s, 15)
    col.colors[0] = 0
    assert verify_coloring(s, col, domain=[0])
    assert not verify_coloring(s, col, domain=[1])


def test_from_classes_rejects_overlap():
    s = space(3, 2)
    with pytest.raises(ValueError):
        Coloring.from_classes(s, [[0], [0]])


def test_property_r_flat_checked():
    s = space(3, 3)
    par = search_parallelism(s).solution
    _, cert = color_ipg3(s, par, 0)
    bad = PropertyRCertificate(s, np.array([0, 1, 2, 3]), cert.coloring, cert.incident)
    assert not verify_property_r(bad)
    short = PropertyRCertificate(s, cert.flat, cert.coloring, cert.incident[:-1])
    assert not verify_property_r(short)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_random_partial_colorings_never_clash_when_verified(seed):
    """Greedy random colorings: the verifier accepts exactly the proper ones."""
    s = space(3, 2)
    rng = np.random.default_rng(seed)
    col = Coloring.empty(s, 6)
    col.colors[:] = rng.integers(0, 6, s.num_lines)
    proper = True
    for p in range(s.v):
        c = col.colors[s.point_lines[p]]
        proper &= len(np.unique(c)) == len(c)
    assert bool(verify_coloring(s, col)) == proper


def test_colors_stay_uncolored_sentinel():
    assert UNCOLORED == -1
