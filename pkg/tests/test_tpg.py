from __future__ import annotations

import numpy as np
import pytest

from pgcolor.space import gaussian_binomial
from pgcolor.tpg import (Resolution, TransversalDesign, build_td, build_tpg, embed_tpg,
                         hyperplane_pencil_decomposition, incidence_count_hyperplane, resolve_tpg,
                         tpg_by_removal, tpg_params, verify_pencil, verify_resolution, verify_td)

from conftest import space

CASES = [(3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2)]


@pytest.mark.parametrize("n,q", CASES)
def test_tpg_is_resolvable_td(n, q):
    td = build_tpg(n, q)
    assert (td.k, td.m) == tpg_params(n, q)
    assert len(td.blocks) == q ** (2 * (n - 1))
    assert verify_td(td)
    res = resolve_tpg(td, n, q)
    assert len(res.classes) == q ** (n - 1)
    assert verify_resolution(td, res)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_removal_matches_counts(n, q):
    s = space(n, q)
    sub = s.subspace_points([s.point_of([int(k == t) for k in range(n + 1)]) for t in range(n - 1)])
    td = tpg_by_removal(s, sub)
    assert (td.k, td.m) == tpg_params(n, q)
    assert verify_td(td)
    assert len(td.blocks) == q ** (2 * (n - 1))


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (3, 3)])
def test_pencil(n, q):
    s = space(n, q)
    sub = s.subspace_points([s.point_of([int(k == t) for k in range(n + 1)]) for t in range(n - 1)])
    dec = hyperplane_pencil_decomposition(s, sub)
    assert verify_pencil(s, dec)
    assert len(dec.C) == gaussian_binomial(n - 1, 2, q)
    for h in dec.hyperplanes:
        assert incidence_count_hyperplane(s, h) == s.num_lines


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_embedded_blocks_are_lines(n, q):
    s, labels, ids = embed_tpg(n, q)
    td = build_tpg(n, q)
    assert len(np.unique(ids)) == len(td.blocks)
    for b, lid in zip(td.blocks, ids):
        assert sorted(labels[b].tolist()) == sorted(s.line_points[lid].tolist())


def test_resolution_classes_are_line_disjoint_in_space():
    n, q = 4, 2
    s, labels, ids = embed_tpg(n, q)
    td = build_tpg(n, q)
    for cls in resolve_tpg(td).classes:
        pts = s.line_points[ids[cls]].ravel()
        assert len(np.unique(pts)) == len(pts)


def test_broken_design_detected():
    td = build_td(2, 2)
    blocks = td.blocks.copy()
    blocks[0] = blocks[1]
    assert not verify_td(TransversalDesign(td.k, td.m, blocks))


def test_broken_resolution_detected():
    td = build_tpg(3, 3)
    res = resolve_tpg(td)
    classes = [c.copy() for c in res.classes]
    classes[0][0], classes[1][0] = classes[1][0], classes[0][0]
    assert not verify_resolution(td, Resolution(classes))


def test_resolution_needs_big_field():
    with pytest.raises(ValueError):
        resolve_tpg(build_td(3, 1))
    with pytest.raises(ValueError):
        tpg_params(2, 2)
