from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcolor.exact_cover import BudgetExceeded, DLX, exact_covers
from pgcolor.orbits import orbit_partition, translate_ids
from pgcolor.spreads import (_CoverSearch, short_orbit_base_line, brute_force_max_partial_spread, count_spreads_backtrack, count_spreads_dlx,
                             max_partial_spread_size, search_parallelism, search_spread, spread_size,
                             verify_parallelism, verify_partial_spread, verify_spread, withE_profile)

from conftest import space


def test_dlx_small_cover():
    # Knuth's example matrix: unique cover {0, 3, 4}
    rows = [[2, 4, 5], [0, 3, 6], [1, 2, 5], [0, 3], [1, 6], [3, 4, 6]]
    assert list(exact_covers(7, rows)) == [[0, 3, 4]]


def test_dlx_secondary_columns():
    rows = [[0, 2], [1, 2], [0], [1]]
    sols = sorted(exact_covers(2, rows, n_secondary=1))
    assert sols == [[0, 3], [1, 2], [2, 3]]


def test_dlx_budget():
    s = space(3, 3)
    dlx = DLX(s.v, [list(map(int, r)) for r in s.line_points])
    with pytest.raises(BudgetExceeded):
        list(dlx.solutions(budget=5))


def test_spread_counts_agree_on_pg32():
    s = space(3, 2)
    for line in (0, 17, 34):
        assert count_spreads_backtrack(s, line) == count_spreads_dlx(s, line) == 8


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (3, 4), (5, 2)])
def test_search_spread(n, q):
    s = space(n, q)
    out = search_spread(s)
    assert out.found
    assert len(out.solution) == spread_size(n, q)
    assert verify_spread(s, out.solution)


def test_search_spread_contains():
    s = space(3, 3)
    out = search_spread(s, contains=[5, 77])
    if out.found:
        assert {5, 77} <= set(out.solution) and verify_spread(s, out.solution)
    else:
        assert not verify_partial_spread(s, [5, 77]) or out.status == "infeasible"


def test_intersecting_forced_lines_infeasible():
    s = space(3, 2)
    a = int(s.point_lines[0, 0])
    b = int(s.point_lines[0, 1])
    assert search_spread(s, contains=[a, b]).status == "infeasible"


@pytest.mark.parametrize("q", [2, 4])
def test_withE_profile_search(q):
    s = space(3, q)
    out = search_spread(s, profile="withE")
    assert out.found
    of = orbit_partition(s).orbit_of()
    assert np.bincount(of[out.solution]).tolist() == [1] + [q] * q


def test_withE_q3_exhausts():
    out = search_spread(space(3, 3), profile="withE")
    assert out.status == "infeasible"


def withE_profile_count(s) -> tuple[int, int]:
    """(spreads through the short base line, those with the withE orbit profile),
    by plain DLX enumeration."""
    of = orbit_partition(s).orbit_of()
    l0 = short_orbit_base_line(s)
    dlx = DLX(s.v, [list(map(int, r)) for r in s.line_points])
    dlx.select(l0)
    total = hits = 0
    for sol in dlx.solutions():
        counts = np.bincount(of[sol + [l0]], minlength=s.q + 1)
        total += 1
        hits += counts.tolist() == [1] + [s.q] * s.q
    return total, hits


def test_withE_q3_impossible_by_enumeration():
    # translations act transitively on the short orbit, so checking spreads
    # through one short line covers every spread
    assert withE_profile_count(space(3, 3)) == (648, 0)
    assert withE_profile_count(space(3, 2))[1] > 0


def test_withE_profile_shape():
    group_of, caps = withE_profile(space(3, 3))
    assert caps == [1, 3, 3, 3]


def test_search_budget_exhausts():
    out = search_spread(space(5, 2), budget=3, order="first")
    assert out.status == "exhausted"


@pytest.mark.parametrize("q,group", [(2, None), (3, None), (3, 2), (4, 5)])
def test_search_parallelism(q, group):
    s = space(3, q)
    out = search_parallelism(s, group_order=group)
    assert out.found
    assert len(out.solution) == q * q + q + 1
    assert verify_parallelism(s, out.solution)


@pytest.mark.parametrize("q", [2, 3])
def test_group_orbits_cannot_fit(q):
    # q^2+q non-short spreads cannot split into translate-orbits of size 5
    assert search_parallelism(space(3, q), group_order=5).status == "infeasible"


def test_pg32_no_translation_invariant_parallelism():
    """Enumerate all parallelisms of PG(3,2) by exact cover over its spreads;
    none is invariant under a nontrivial translation, matching the search."""
    s = space(3, 2)
    spreads = [tuple(sorted(sp)) for sp in _CoverSearch(s).solutions([])]
    assert len(spreads) == 56
    packings = list(exact_covers(s.num_lines, [list(sp) for sp in spreads]))
    assert len(packings) == 240
    for g in (3, 5, 15):
        shift = s.v // g
        invariant = 0
        for pk in packings:
            fam = {spreads[i] for i in pk}
            moved = {tuple(sorted(translate_ids(s, list(sp), shift).tolist())) for sp in fam}
            invariant += fam == moved
        assert invariant == 0
        assert search_parallelism(s, group_order=g).status == "infeasible"


def test_parallelism_restarts_and_budget():
    s = space(3, 3)
    out = search_parallelism(s, budget=10, restarts=2, seed=4)
    assert out.status in ("found", "exhausted")
    if out.status == "exhausted":
        for sp in out.frontier:
            assert verify_spread(s, sp)


def test_bad_group_order():
    with pytest.raises(ValueError):
        search_parallelism(space(3, 2), group_order=4)
    with pytest.raises(ValueError):
        search_parallelism(space(4, 2))


def test_max_partial_spread_formula():
    assert max_partial_spread_size(4, 2) == 9
    assert max_partial_spread_size(4, 3) == 28
    assert max_partial_spread_size(3, 3) == 10
    assert max_partial_spread_size(5, 2) == 21
    assert max_partial_spread_size(6, 2) == 41


def test_brute_force_pg3_2():
    assert brute_force_max_partial_spread(space(3, 2))[0] == 5


def test_verifier_messages():
    s = space(3, 2)
    sp = search_spread(s).solution
    assert "not a spread" in verify_spread(s, sp[:-1]).message or not verify_spread(s, sp[:-1])
    bad = sp[:-1] + [int(s.point_lines[s.line_points[sp[0], 0], 1])]
    v = verify_partial_spread(s, bad)
    assert not v


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_seed_search_verifies(seed):
    s = space(3, 3)
    out = search_spread(s, seed=seed)
    assert out.found and verify_spread(s, out.solution)
