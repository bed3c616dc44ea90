from __future__ import annotations

import numpy as np

from pgcolor.coloring import verify_coloring, verify_property_r
from pgcolor.pg4search import counting_bound_feasible, search_ipg4_certificate, search_pg4_coloring, tabu_color

from conftest import space


def test_pg42_with_18_colors():
    out = search_pg4_coloring(2, seed=0)
    assert out.found
    assert out.solution.palette == 18
    assert verify_coloring(out.solution.space, out.solution)


def test_below_counting_bound_is_infeasible():
    assert not counting_bound_feasible(4, 2, 17)
    assert counting_bound_feasible(4, 3, 44)
    assert search_pg4_coloring(2, palette=17).status == "infeasible"


def test_ipg42_certificate():
    out = search_ipg4_certificate(2, seed=1)
    assert out.found
    assert verify_property_r(out.solution)


def test_exhausted_frontier_is_proper():
    s = space(4, 3)
    out = tabu_color(s, 44, budget=200, seed=0)
    assert out.status == "exhausted"
    fr = out.frontier
    col = fr["coloring"]
    colored = np.flatnonzero(col.colors >= 0)
    assert len(colored) == fr["colored"] < s.num_lines
    assert verify_coloring(s, col, domain=colored)
    assert not verify_coloring(s, col)


def test_allowed_mask_respected():
    s = space(3, 2)
    allowed = np.ones((s.num_lines, 7), dtype=bool)
    allowed[:, 6] = False
    out = tabu_color(s, 7, allowed=allowed, budget=20000, seed=2)
    if out.found:
        assert (out.solution.colors < 6).all()
    else:
        assert out.status == "exhausted"  # 6 colors cannot color PG(3,2)
