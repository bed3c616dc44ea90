from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcolor.space import build_space, gaussian_binomial, linear_isomorphism, space_from_json

from conftest import space

CASES = [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (4, 2), (5, 2)]


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(4, 2, 3) == 130
    assert gaussian_binomial(5, 2, 3) == 1210
    assert gaussian_binomial(6, 1, 8) == 37449
    assert gaussian_binomial(3, 0, 5) == 1
    with pytest.raises(ValueError):
        gaussian_binomial(2, 3, 2)


@pytest.mark.parametrize("n,q,model", [(n, q, "singer") for n, q in CASES]
                         + [(n, q, "product") for n, q in CASES if n >= 3])
def test_counts(n, q, model):
    s = space(n, q, model)
    assert s.v == gaussian_binomial(n + 1, 1, q)
    assert s.num_lines == gaussian_binomial(n + 1, 2, q)
    assert s.line_points.shape == (s.num_lines, q + 1)
    assert s.point_lines.shape == (s.v, s.lines_per_point)
    # every pair of points on exactly one line
    pl = s.pair_line
    off = ~np.eye(s.v, dtype=bool)
    assert (pl[off] >= 0).all()
    counts = np.bincount(pl[off], minlength=s.num_lines)
    assert (counts == q * (q + 1)).all()


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_singer_shift_is_collineation(n, q):
    s = space(n, q)
    shifted = np.sort((s.line_points + 1) % s.v, axis=1)
    ids = s.pair_line[shifted[:, 0], shifted[:, 1]]
    assert np.array_equal(np.sort(s.line_points[ids], axis=1), shifted)


@pytest.mark.parametrize("model", ["singer", "product"])
def test_coords_roundtrip(model):
    s = space(3, 3, model)
    for p in range(s.v):
        assert s.point_of(s.coords(p)) == p


def test_product_points_normalized():
    s = space(3, 3, "product")
    for p in range(s.v):
        c = s.coords(p)
        first = next(x for x in c if x)
        assert first == 1


def test_line_id_rejects_non_lines():
    s = space(3, 2)
    with pytest.raises(KeyError):
        s.line_id([0, 1, 2])


def test_subspace_points_and_rank():
    s = space(4, 2)
    plane = s.subspace_points([s.point_of([int(k == t) for k in range(5)]) for t in range(3)])
    assert len(plane) == 7
    assert s.rank_of(plane.tolist()) == 3
    mask = np.zeros(s.v, dtype=bool)
    mask[plane] = True
    assert len(s.lines_inside(mask)) == 7
    # lines meeting a plane of PG(4,2): 7 inside + 7*(15-3) through one point
    assert len(s.lines_meeting(mask)) == 7 + 7 * 12


def test_describe_roundtrip():
    for model in ("singer", "product"):
        s = space(3, 4, model)
        t = space_from_json(s.describe())
        assert np.array_equal(s.line_points, t.line_points)


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)))
def test_coordinate_permutation_maps_lines_to_lines(perm):
    src, dst = space(3, 2), space(3, 2, "product")
    pm = linear_isomorphism(src, dst, [[int(i == perm[k]) for i in range(4)] for k in range(4)])
    assert sorted(pm.table.tolist()) == list(range(dst.v))
    ids = pm.map_lines(np.arange(src.num_lines))
    assert sorted(ids.tolist()) == list(range(dst.num_lines))


def test_dependent_images_rejected():
    with pytest.raises(ValueError):
        linear_isomorphism(space(3, 2), space(3, 2), [[1, 0, 0, 0]] * 4)


def test_pair_table_cap():
    with pytest.raises(MemoryError):
        build_space(5, 8).pair_line


def test_bad_arguments():
    with pytest.raises(ValueError):
        build_space(0, 2)
    with pytest.raises(ValueError):
        build_space(3, 2, "affine")
    with pytest.raises(ValueError):
        build_space(3, 6)


def test_lines_through_point_cover_everything_once():
    s = space(3, 3)
    for p in range(0, s.v, 7):
        pts = s.line_points[s.point_lines[p]]
        others = pts[pts != p]
        assert sorted(others.tolist()) == [x for x in range(s.v) if x != p]


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2)])
def test_three_points_collinear_iff_same_line(n, q):
    s = space(n, q)
    pl = s.pair_line
    for a, b, c in itertools.islice(itertools.combinations(range(s.v), 3), 2000):
        col = pl[a, b] == pl[a, c]
        assert col == (s.rank_of([a, b, c]) == 2)
