"""Best-effort line colorings of PG(4,q) and IPG(4,q;2) by tabu search.

Even dimensions have no spreads, so no recursion reaches them; these
colorings are inputs to the even-n construction.  The search minimizes the
number of same-colored intersecting pairs over complete assignments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .coloring import UNCOLORED, Coloring, PropertyRCertificate, incident_color_count, target_chromatic_index
from .space import ProjectiveSpace, build_space, gaussian_binomial
from .spreads import max_partial_spread_size
from .verdict import SearchOutcome


@dataclass
class _State:
    colors: np.ndarray
    conflicts: int


def _neighbours(space: ProjectiveSpace, domain: np.ndarray) -> list[np.ndarray]:
    idx = np.full(space.num_lines, -1, dtype=np.int64)
    idx[domain] = np.arange(len(domain))
    out = []
    for lid in domain:
        nb = idx[space.point_lines[space.line_points[lid]].ravel()]
        nb = np.unique(nb[nb >= 0])
        out.append(nb[nb != idx[lid]])
    return out


def tabu_color(space: ProjectiveSpace, palette: int, domain=None, allowed: np.ndarray | None = None,
               budget: int = 200_000, seed: int | None = 0, tenure: int = 10) -> SearchOutcome:
    """Color the lines in ``domain`` (default all) with ``palette`` colors.

    ``allowed`` is an optional (len(domain), palette) boolean mask.  Returns
    ``found`` with a Coloring, or ``exhausted`` with the best assignment's
    proper part (conflicting lines left uncolored) as the frontier.
    """
    rng = random.Random(seed)
    domain = np.arange(space.num_lines) if domain is None else np.asarray(domain, dtype=np.int64)
    L = len(domain)
    if allowed is None:
        allowed = np.ones((L, palette), dtype=bool)
    if not allowed.any(axis=1).all():
        return SearchOutcome("infeasible", None, 0)
    nbrs = _neighbours(space, domain)
    col = np.array([rng.choice(np.flatnonzero(allowed[i]).tolist()) for i in range(L)], dtype=np.int64)
    gamma = np.zeros((L, palette), dtype=np.int64)
    for i in range(L):
        np.add.at(gamma[i], col[nbrs[i]], 1)
    big = 10 ** 9
    penalty = np.where(allowed, 0, big)
    tabu = np.zeros((L, palette), dtype=np.int64)
    conf = int(gamma[np.arange(L), col].sum()) // 2
    best_conf, best_col = conf, col.copy()
    it = 0
    while conf > 0 and it < budget:
        it += 1
        cur = gamma[np.arange(L), col]
        bad = np.flatnonzero(cur > 0)
        delta = gamma[bad] - cur[bad, None] + penalty[bad]
        delta[np.arange(len(bad)), col[bad]] = big
        ok = (tabu[bad] <= it) | (conf + delta < best_conf)
        delta = np.where(ok, delta, big)
        m = delta.min()
        if m >= big:
            continue
        choices = np.argwhere(delta == m)
        r, c = choices[rng.randrange(len(choices))]
        i = int(bad[r])
        old = int(col[i])
        col[i] = int(c)
        nb = nbrs[i]
        gamma[nb, old] -= 1
        gamma[nb, int(c)] += 1
        conf += int(m)
        tabu[i, old] = it + tenure + rng.randrange(tenure + 1)
        if conf < best_conf:
            best_conf, best_col = conf, col.copy()
    colors = np.full(space.num_lines, UNCOLORED, dtype=np.int64)
    if best_conf == 0:
        colors[domain] = best_col
        return SearchOutcome("found", Coloring(space, colors, palette), it)
    # drop conflicting lines greedily to report a proper partial coloring
    col = best_col.copy()
    keep = np.ones(L, dtype=bool)
    for i in range(L):
        if keep[i] and (col[nbrs[i]][keep[nbrs[i]]] == col[i]).any():
            keep[i] = False
    colors[domain[keep]] = col[keep]
    return SearchOutcome("exhausted", None, it,
                         frontier={"coloring": Coloring(space, colors, palette),
                                   "colored": int(keep.sum()), "conflicts": best_conf})


def counting_bound_feasible(n: int, q: int, palette: int) -> bool:
    """Every color class is a partial spread, so palette*mu >= #lines is necessary."""
    return palette * max_partial_spread_size(n, q) >= gaussian_binomial(n + 1, 2, q)


def search_pg4_coloring(q: int, palette: int | None = None, budget: int = 200_000,
                        seed: int | None = 0) -> SearchOutcome:
    """Look for a proper ``palette``-coloring of PG(4,q) (default c(4,q)).

    A palette below the counting bound is reported ``infeasible`` without
    searching; otherwise the outcome is best effort.
    """
    palette = target_chromatic_index(4, q) if palette is None else palette
    if not counting_bound_feasible(4, q, palette):
        return SearchOutcome("infeasible", None, 0)
    space = build_space(4, q)
    return tabu_color(space, palette, budget=budget, seed=seed)


def search_ipg4_certificate(q: int, budget: int = 200_000, seed: int | None = 0,
                            space: ProjectiveSpace | None = None) -> SearchOutcome:
    """Look for a c(4,q)-coloring of IPG(4,q;2) whose lines meeting the plane
    use only the first q^2(q+1) colors (property R)."""
    space = build_space(4, q) if space is None else space
    palette = target_chromatic_index(4, q)
    flat = space.subspace_points([space.point_of([int(k == t) for k in range(5)]) for t in range(3)])
    mask = np.zeros(space.v, dtype=bool)
    mask[flat] = True
    inside = space.lines_inside(mask)
    domain = np.setdiff1d(np.arange(space.num_lines), inside)
    meets = mask[space.line_points[domain]].any(axis=1)
    k = incident_color_count(4, q)
    allowed = np.ones((len(domain), palette), dtype=bool)
    allowed[meets, k:] = False
    out = tabu_color(space, palette, domain, allowed, budget=budget, seed=seed)
    if out.found:
        out.solution = PropertyRCertificate(space, flat, out.solution, np.arange(k))
    return out
