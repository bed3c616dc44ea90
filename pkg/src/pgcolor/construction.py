"""The recursive construction: PG(n,q) assembled from PG(3,q), a PG(n-4,q)
and q^2+1 copies of PG(n-2,q), then colored in three steps.

Coordinates are (w, u) with w in GF(q)^4 (the low four digits of a vector
code) and u in GF(q)^(n-3).  Y is the flat w = 0 and G_i' the points with
w on the i-th line of the special spread.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .coloring import (UNCOLORED, ColorBudget, Coloring, PropertyRCertificate, color_ipg3,
                       target_chromatic_index, verify_coloring, verify_property_r)
from .property_e import PropertyECertificate, transport, verify_property_e
from .space import MAX_PAIR_TABLE_POINTS, ProjectiveSpace, adapted_embedding, build_space, gaussian_binomial
from .spreads import search_parallelism, verify_parallelism, verify_spread
from .tpg import build_td, class_key, resolve_tpg
from .verdict import Verdict

log = logging.getLogger(__name__)


class ConstructionError(RuntimeError):
    pass


@dataclass
class CompositeSpace:
    n: int
    q: int
    space: ProjectiveSpace        # product-model PG(n,q)
    space3: ProjectiveSpace       # product-model PG(3,q) carrying the spread
    P: list[int]                  # spread lines G_0..G_{q^2} in space3
    A0: np.ndarray                # lines of space3 not in P
    ab: np.ndarray                # (|A0|, 2) vector codes of the two least points of each A0 line
    A1: np.ndarray                # (|A0|, q^(2(n-3))) line ids, column = u*m + u'
    Y: np.ndarray
    C: np.ndarray
    G: list[np.ndarray]           # G_i' point sets
    B: list[np.ndarray]           # lines of span(G_i' u Y) not inside Y

    @property
    def d(self) -> int:
        return self.n - 3

    def u_basis(self) -> list[list[int]]:
        N = self.n + 1
        return [[int(k == 4 + t) for k in range(N)] for t in range(self.d)]

    def g_basis(self, i: int) -> list[list[int]]:
        """Two vectors of GF(q)^(n+1) spanning G_i (w part only)."""
        a, b = self.space3.line_points[self.P[i]][:2]
        pad = [0] * self.d
        return [self.space3.coords(int(a)) + pad, self.space3.coords(int(b)) + pad]


def assemble_composite_space(n: int, q: int, space3: ProjectiveSpace, P, space: ProjectiveSpace | None = None
                             ) -> CompositeSpace:
    """Split the lines of product PG(n,q) into A1, C and B_1..B_{q^2+1}
    following a spread ``P`` of the product-model PG(3,q) ``space3``."""
    if n < 5:
        raise ValueError("the composite construction needs n >= 5")
    if space3.model != "product" or space3.n != 3 or space3.q != q:
        raise ValueError("space3 must be product-model PG(3,q)")
    P = [int(x) for x in P]
    if not verify_spread(space3, P):
        raise ValueError("P is not a spread of PG(3,q)")
    if space is None:
        space = build_space(n, q, "product")
    vs = space.vs
    d = n - 3
    m = q ** d
    q4 = q ** 4
    w_code = vs.digit(space.vec, 0) + q * vs.digit(space.vec, 1) + q * q * vs.digit(space.vec, 2) \
        + q ** 3 * vs.digit(space.vec, 3)
    Ymask = w_code == 0
    Y = np.flatnonzero(Ymask)
    C = space.lines_inside(Ymask)

    # normalized w (as a point of PG(3,q)) for every point outside Y
    w_point = np.full(space.v, -1, dtype=np.int64)
    w_point[~Ymask] = space3.point_of_vec[w_code[~Ymask]]
    spread_of = np.full(space3.v, -1, dtype=np.int64)
    for i, lid in enumerate(P):
        spread_of[space3.line_points[lid]] = i
    G, B = [], []
    for i in range(len(P)):
        gmask = np.zeros(space.v, dtype=bool)
        gmask[~Ymask] = spread_of[w_point[~Ymask]] == i
        G.append(np.flatnonzero(gmask))
        B.append(np.setdiff1d(space.lines_inside(gmask | Ymask), C))

    in_p = np.zeros(space3.num_lines, dtype=bool)
    in_p[P] = True
    A0 = np.flatnonzero(~in_p)
    ab = space3.vec[space3.line_points[A0][:, :2]]
    uu = np.arange(m * m, dtype=np.int64)
    u, u2 = uu // m, uu % m
    xa = space.point_of_vec[vs.add(ab[:, :1], (u * q4)[None, :])]
    xb = space.point_of_vec[vs.add(ab[:, 1:], (u2 * q4)[None, :])]
    A1 = space.pair_line[xa, xb].astype(np.int64)
    return CompositeSpace(n, q, space, space3, P, A0, ab, A1, Y, C, G, B)


def audit_composite(comp: CompositeSpace, pair_check_limit: int = 1500) -> Verdict:
    """A1, C and the B_i partition the lines; G_1' u Y is an (n-2)-flat;
    for v <= ``pair_check_limit`` every point pair is covered once."""
    space = comp.space
    counts = np.zeros(space.num_lines, dtype=np.int64)
    for part in [comp.A1.ravel(), comp.C, *comp.B]:
        np.add.at(counts, part, 1)
    if (counts != 1).any():
        return Verdict.fail(f"{int((counts != 1).sum())} lines not in exactly one part")
    q, n = comp.q, comp.n
    if len(comp.A1.ravel()) != len(comp.A0) * q ** (2 * (n - 3)):
        return Verdict.fail("A1 has the wrong size")
    flat = np.concatenate([comp.G[0], comp.Y])
    if space.rank_of(flat.tolist()) != n - 1 or len(flat) != (q ** (n - 1) - 1) // (q - 1):
        return Verdict.fail("G_1' u Y is not an (n-2)-flat")
    if space.v <= pair_check_limit:
        lp = space.line_points.astype(np.int64)
        i, j = np.triu_indices(space.k, 1)
        keys = (lp[:, i] * space.v + lp[:, j]).ravel()
        if len(np.unique(keys)) != space.v * (space.v - 1) // 2 or len(keys) != len(np.unique(keys)):
            return Verdict.fail("point pairs not covered exactly once")
    return Verdict(True, f"{len(comp.A1.ravel())} + {len(comp.C)} + "
                         f"{sum(len(b) for b in comp.B)} = {space.num_lines} lines")


# -- recursion ------------------------------------------------------------------------

@dataclass
class LevelInputs:
    """A c(m,q)-coloring of PG(m,q) and a property R certificate of IPG(m,q;m-2)."""

    full: Coloring
    ipg: PropertyRCertificate


@dataclass
class RecursionResult:
    coloring: Coloring
    property_r: PropertyRCertificate
    budget: ColorBudget
    composite: CompositeSpace
    audits: dict[str, Verdict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(bool(v) for v in self.audits.values())


def base_parallelism(q: int, budget: int | None = 5_000_000, seed: int | None = None) -> tuple[ProjectiveSpace, list]:
    """A parallelism of Singer PG(3,q) by search.  q = 4 uses the translation
    subgroup of order 5, which keeps the search short."""
    space = build_space(3, q)
    group = {4: 5}.get(q)
    out = search_parallelism(space, group_order=group, budget=budget, seed=seed)
    if not out.found:
        raise ConstructionError(f"no PG(3,{q}) parallelism found ({out.status} after {out.nodes} nodes); "
                                "import one instead")
    return space, out.solution


def base_inputs(q: int, parallelism=None, space: ProjectiveSpace | None = None) -> LevelInputs:
    """Level-3 inputs from a parallelism (searched when not given); the
    distinguished line is line 0."""
    if parallelism is None:
        space, parallelism = base_parallelism(q)
    elif space is None:
        space = build_space(3, q)
    full, ipg = color_ipg3(space, parallelism, 0)
    return LevelInputs(full, ipg)


def pool_table(comp: CompositeSpace, labels_members: list[tuple[tuple[int, int], list[int]]],
               budget: ColorBudget) -> np.ndarray:
    """(|A0|, q^(n-3)) colors for each A0 line: the union of C_i^j over the
    members (i, j) of S containing it, in increasing order."""
    pools: dict[int, list[np.ndarray]] = {int(l): [] for l in comp.A0}
    for (i, j), member in sorted(labels_members):
        for l in member:
            if l in pools:
                pools[l].append(budget.split(i, j))
    width = comp.q ** (comp.n - 3)
    out = np.empty((len(comp.A0), width), dtype=np.int64)
    for r, l in enumerate(comp.A0):
        arr = np.concatenate(pools[int(l)]) if pools[int(l)] else np.zeros(0, dtype=np.int64)
        if len(arr) != width:
            raise ConstructionError(f"A0 line {int(l)} gets {len(arr)} colors, Step 3 needs {width}")
        out[r] = np.sort(arr)
    return out


def _transport_coloring(comp: CompositeSpace, src: Coloring, flat, i: int, new_colors: np.ndarray,
                        target: Coloring, domain) -> np.ndarray:
    """Place ``src`` (restricted to ``domain``) onto span(G_i' u Y), sending
    ``flat`` onto Y, and recolor by ``new_colors[old]``.  Returns the ids."""
    pm = adapted_embedding(src.space, [int(x) for x in flat], comp.space, comp.u_basis(), comp.g_basis(i))
    dom = np.asarray(domain, dtype=np.int64)
    ids = pm.map_lines(dom).astype(np.int64)
    if (ids < 0).any() or (target.colors[ids] != UNCOLORED).any():
        raise ConstructionError(f"transported lines for group {i} collide")
    target.colors[ids] = new_colors[src.colors[dom]]
    return ids


def color_level(n: int, q: int, cert: PropertyECertificate, lower: LevelInputs,
                check: bool = True) -> RecursionResult:
    """One application of the three-step coloring: PG(n,q) from level n-2."""
    if lower.full.space.n != n - 2 or lower.ipg.space.n != n - 2:
        raise ValueError(f"level {n} needs PG({n - 2},{q}) inputs")
    budget = ColorBudget(n, q)
    audits: dict[str, Verdict] = {"budget": budget.audit()}
    if not audits["budget"]:
        raise ConstructionError(audits["budget"].message)
    space3 = build_space(3, q, "product")
    P, S = transport(cert, space3)
    labels = cert.member_labels()
    comp = assemble_composite_space(n, q, space3, P)
    if check:
        audits["composite"] = audit_composite(comp)
    coloring = Coloring.empty(comp.space, budget.total)
    groups = budget.groups

    def recolor_map(incident: np.ndarray, i: int, palette: int) -> np.ndarray:
        incident = np.sort(np.asarray(incident, dtype=np.int64))
        rest = np.setdiff1d(np.arange(palette), incident)
        new = np.empty(palette, dtype=np.int64)
        new[incident] = budget.C(i)
        new[rest] = budget.star()
        return new

    # Step 1: a full PG(n-2,q) on G_1' u Y.  Any split into C_1 and C* works;
    # the incident colors of the lower certificate go to C_1.
    low_ipg = lower.ipg
    if lower.full.space is low_ipg.space:
        flat1, split1 = low_ipg.flat, low_ipg.incident
    else:
        fs = lower.full.space
        flat1 = fs.subspace_points([fs.point_of([int(k == t) for k in range(fs.N)]) for t in range(n - 3)])
        split1 = np.arange(budget.c1)
    step1_map = recolor_map(split1, 0, lower.full.palette)
    ids1 = _transport_coloring(comp, lower.full, flat1, 0, step1_map, coloring,
                               np.arange(lower.full.space.num_lines))
    # Step 2: IPG(n-2,q;n-4) on G_i' u Y for the other groups
    low_dom = np.flatnonzero(low_ipg.coloring.colors >= 0)
    for i in range(1, groups):
        _transport_coloring(comp, low_ipg.coloring, low_ipg.flat, i,
                            recolor_map(low_ipg.incident, i, low_ipg.coloring.palette), coloring, low_dom)
    # Step 3: TPG(n-2,q) on each A0 line with its pool of q^(n-3) colors
    pools = pool_table(comp, list(zip(labels, S)), budget)
    m = q ** (n - 3)
    uu = np.arange(m * m, dtype=np.int64)
    cls = class_key(q, n - 3, uu // m, uu % m)
    coloring.colors[comp.A1] = pools[:, cls]

    if check:
        expect1 = np.sort(np.concatenate([comp.B[0], comp.C]))
        audits["step1_lines"] = Verdict(bool(np.array_equal(np.sort(ids1), expect1)),
                                        "Step 1 covers B_1 and C")
        audits["property_e"] = verify_property_e(cert)
        audits["capacity"] = _capacity_audit(comp, pools, q, n)
        audits["disjoint_pools"] = _disjoint_pool_audit(comp, pools)
        audits["coloring"] = verify_coloring(comp.space, coloring)
        if n % 2:
            audits["parallelism"] = verify_parallelism(comp.space, coloring.classes())
    flat = np.sort(np.concatenate([comp.G[0], comp.Y]))
    ipg = coloring.copy()
    fmask = np.zeros(comp.space.v, dtype=bool)
    fmask[flat] = True
    ipg.colors[comp.space.lines_inside(fmask)] = UNCOLORED
    incident = np.concatenate([budget.C(i) for i in range(1, groups)])
    cert_r = PropertyRCertificate(comp.space, flat, ipg, incident)
    if check:
        audits["property_r"] = verify_property_r(cert_r)
    failed = [k for k, v in audits.items() if not v]
    if failed:
        raise ConstructionError("; ".join(f"{k}: {audits[k].message}" for k in failed))
    return RecursionResult(coloring, cert_r, budget, comp, audits)


def _capacity_audit(comp: CompositeSpace, pools: np.ndarray, q: int, n: int) -> Verdict:
    classes = len(resolve_tpg(build_td(q, n - 3)).classes)
    width = pools.shape[1]
    if width != classes:
        return Verdict.fail(f"pools of {width} colors but TPG({n - 2},{q}) needs {classes}")
    if any(len(np.unique(r)) != width for r in pools):
        return Verdict.fail("a pool repeats a color")
    return Verdict(True, f"every A0 line owns {width} = q^{n - 3} colors")


def _disjoint_pool_audit(comp: CompositeSpace, pools: np.ndarray) -> Verdict:
    """Intersecting A0 lines must own disjoint pools."""
    s3 = comp.space3
    row_of = np.full(s3.num_lines, -1, dtype=np.int64)
    row_of[comp.A0] = np.arange(len(comp.A0))
    for p in range(s3.v):
        rows = row_of[s3.point_lines[p]]
        rows = rows[rows >= 0]
        allc = pools[rows].ravel()
        if len(np.unique(allc)) != len(allc):
            return Verdict.fail(f"two A0 lines through point {p} share a pool color", point=p)
    return Verdict(True, "pools of intersecting A0 lines are disjoint")


def recursive_color(n: int, q: int, cert: PropertyECertificate, base: LevelInputs | None = None,
                    even_base: LevelInputs | None = None, check: bool = True,
                    keep: bool = False) -> RecursionResult | list[RecursionResult]:
    """Color PG(n,q) with c(n,q) colors for n >= 5.

    Odd n starts from ``base`` (a level-3 parallelism is searched when
    omitted; any lower odd level with its property R certificate works).
    Even n needs ``even_base``: a c(4,q)-coloring of PG(4,q) and a
    property R certificate of IPG(4,q;2), or the pair from a lower even
    level.  With ``keep`` every level's result is returned.
    """
    if n < 5:
        raise ValueError("recursive_color handles n >= 5")
    v = gaussian_binomial(n + 1, 1, q)
    if v > MAX_PAIR_TABLE_POINTS:
        raise MemoryError(f"PG({n},{q}) has {v} points; in-memory line tables are capped at "
                          f"{MAX_PAIR_TABLE_POINTS}")
    if check:
        v = verify_property_e(cert)
        if not v:
            raise ConstructionError(f"property E certificate rejected: {v.message}")
    if cert.q != q:
        raise ValueError("certificate is for a different q")
    if n % 2:
        lower = base if base is not None else base_inputs(q)
    else:
        if even_base is None:
            raise ConstructionError("even n needs imported PG(4,q) and IPG(4,q;2) certificates")
        lower = even_base
    start = lower.full.space.n
    if start % 2 != n % 2 or start >= n or start < 3 or lower.full.space.q != q:
        raise ValueError(f"starting inputs in PG({start},{lower.full.space.q}) cannot lead to PG({n},{q})")
    if check:
        vf = verify_coloring(lower.full.space, lower.full)
        vr = verify_property_r(lower.ipg)
        if not vf or lower.full.palette != target_chromatic_index(start, q):
            raise ConstructionError(f"starting coloring rejected: {vf.message}")
        if not vr:
            raise ConstructionError(f"starting property R certificate rejected: {vr.message}")
    results = []
    for level in range(start + 2, n + 1, 2):
        log.info("coloring PG(%d,%d)", level, q)
        res = color_level(level, q, cert, lower, check=check)
        results.append(res)
        lower = LevelInputs(res.coloring, res.property_r)
    return results if keep else results[-1]
