from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcolor.spreads import search_parallelism

from conftest import dataset, recursion, space
from mutations import Tally, member_deletion_trial, recolor_trial, spread_deletion_trial


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_recolor_caught(seed):
    tally = Tally()
    recolor_trial(recursion(5, 2).coloring, np.random.default_rng(seed), tally)
    assert tally.caught == tally.invalid == 1 and tally.false_alarms == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]))
def test_spread_deletion_caught(seed, q):
    s = space(3, q)
    par = search_parallelism(s).solution
    tally = Tally()
    spread_deletion_trial(s, par, np.random.default_rng(seed), tally)
    assert tally.caught == tally.invalid == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4]))
def test_member_deletion_caught(seed, q):
    tally = Tally()
    member_deletion_trial(dataset(q), np.random.default_rng(seed), tally)
    assert tally.caught == tally.invalid == 1


def test_recolor_on_even_coloring_scored_against_oracle():
    """In PG(6,2) a recolor can be harmless; the verifier must agree with the naive check."""
    from pgcolor.construction import LevelInputs, recursive_color
    from pgcolor.pg4search import search_ipg4_certificate, search_pg4_coloring

    a = search_pg4_coloring(2)
    b = search_ipg4_certificate(2, space=a.solution.space)
    col = recursive_color(6, 2, dataset(2), even_base=LevelInputs(a.solution, b.solution)).coloring
    tally = Tally()
    rng = np.random.default_rng(7)
    for _ in range(200):
        recolor_trial(col, rng, tally)
    assert tally.rate == 1.0 and tally.false_alarms == 0
