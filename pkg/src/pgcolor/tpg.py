"""The transversal design TPG(n,q) = TD(q+1, q^(n-1)), its resolution into
parallel classes, and the hyperplane pencil through an (n-2)-flat.

Design points are integers ``g*m + u``: ``g`` is the group, ``u`` the base-q
code of a vector in GF(q)^(n-1) (m = q^(n-1)).  Groups 0..q-1 stand for the
points x + lam*y of PG(1,q) with lam the GF(q) element of code g; group q
stands for y.  The block with parameters (u, u') is
``{(lam, u + lam*u') : lam in GF(q)} + {(q, u')}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldTower
from .space import ProjectiveSpace, VectorSpace, build_space, gaussian_binomial
from .linalg import extend_to_basis, scalars
from .verdict import Verdict


@dataclass
class TransversalDesign:
    """k groups of m points; ``blocks`` is (num_blocks, k) with column g in group g."""

    k: int
    m: int
    blocks: np.ndarray
    params: np.ndarray | None = None  # (num_blocks, 2) codes (u, u') for built designs
    labels: np.ndarray | None = None  # design point -> ambient point, when embedded

    @property
    def num_points(self) -> int:
        return self.k * self.m

    def group_of(self, pts):
        return np.asarray(pts) // self.m


@dataclass
class Resolution:
    classes: list[np.ndarray]  # block indices per parallel class

    def color_of_block(self, num_blocks: int) -> np.ndarray:
        out = np.full(num_blocks, -1, dtype=np.int64)
        for c, idx in enumerate(self.classes):
            out[idx] = c
        return out


def verify_td(td: TransversalDesign) -> Verdict:
    """TD axioms: each block meets every group once and every pair of points
    in distinct groups lies in exactly one block."""
    b = np.asarray(td.blocks, dtype=np.int64)
    k, m = td.k, td.m
    if b.ndim != 2 or b.shape[1] != k:
        return Verdict.fail(f"blocks must have {k} points")
    if b.min(initial=0) < 0 or b.max(initial=0) >= k * m:
        return Verdict.fail("block point out of range")
    groups = np.sort(b // m, axis=1)
    bad = np.flatnonzero((groups != np.arange(k)).any(axis=1))
    if len(bad):
        return Verdict.fail(f"block {int(bad[0])} does not meet every group once", block=int(bad[0]))
    i, j = np.triu_indices(k, 1)
    lo = np.minimum(b[:, i], b[:, j]).ravel()
    hi = np.maximum(b[:, i], b[:, j]).ravel()
    keys = lo * (k * m) + hi
    uniq, counts = np.unique(keys, return_counts=True)
    if (counts > 1).any():
        key = int(uniq[np.argmax(counts > 1)])
        return Verdict.fail(f"pair {divmod(key, k * m)} lies in {int(counts.max())} blocks")
    want = m * m * k * (k - 1) // 2
    if len(uniq) != want:
        return Verdict.fail(f"{len(uniq)} cross-group pairs covered, need {want}")
    return Verdict(True, f"TD({k},{m}) with {len(b)} blocks")


def tpg_params(n: int, q: int) -> tuple[int, int]:
    """(k, m) = (q+1, q^(n-1))."""
    if n < 3:
        raise ValueError("TPG(n,q) needs n >= 3")
    return q + 1, q ** (n - 1)


def _td_from_params(q: int, d: int, u: np.ndarray, u2: np.ndarray) -> np.ndarray:
    vs = VectorSpace(q, d)
    m = q ** d
    cols = [lam * m + vs.add(u, vs.scale(lam, u2)) for lam in range(q)]
    cols.append(q * m + u2)
    return np.stack(cols, axis=1)


def build_td(q: int, d: int) -> TransversalDesign:
    """TD(q+1, q^d) with one block per parameter pair (u, u')."""
    m = q ** d
    uu = np.arange(m * m, dtype=np.int64)
    u, u2 = uu // m, uu % m
    blocks = _td_from_params(q, d, u, u2)
    return TransversalDesign(q + 1, m, blocks, np.stack([u, u2], axis=1))


def build_tpg(n: int, q: int) -> TransversalDesign:
    _, _ = tpg_params(n, q)
    return build_td(q, n - 1)


def class_key(q: int, d: int, u, u2) -> np.ndarray:
    """Resolution class of the block (u, u'): the code of u + g*u' where g is
    the primitive element of GF(q^d), d >= 2 (g lies outside GF(q))."""
    if d < 2:
        raise ValueError("resolution needs a parameter field strictly larger than GF(q)")
    tower = FieldTower(q, d)
    vs = VectorSpace(q, d)
    u2 = np.asarray(u2, dtype=np.int64)
    logs = tower.log_of_vec[u2]
    g_u2 = np.where(u2 == 0, 0, tower.vec_of_log[(logs + 1) % tower.big.q1])
    return vs.add(np.asarray(u, dtype=np.int64), g_u2)


def resolve_tpg(td: TransversalDesign, n: int | None = None, q: int | None = None) -> Resolution:
    """Split the blocks of a built TD(q+1, q^d) into q^d parallel classes.

    Classes are indexed by j in GF(q^d) (by code); class j holds the blocks
    with u + g*u' = j, i.e. the blocks of the one-group extension through
    the point (x + g*y, j) with that point removed.
    """
    if td.params is None:
        raise ValueError("resolution needs a design from build_tpg/build_td")
    q = td.k - 1 if q is None else q
    d = round(np.log(td.m) / np.log(q))
    if q ** d != td.m:
        raise ValueError("group size is not a power of q")
    if n is not None and d != n - 1:
        raise ValueError(f"design has group size q^{d}, not q^{n - 1}")
    keys = class_key(q, d, td.params[:, 0], td.params[:, 1])
    order = np.argsort(keys, kind="stable")
    bounds = np.searchsorted(keys[order], np.arange(td.m + 1))
    return Resolution([order[bounds[j]:bounds[j + 1]] for j in range(td.m)])


def verify_resolution(td: TransversalDesign, res: Resolution) -> Verdict:
    """Each class covers every design point once; classes partition the blocks."""
    nb = len(td.blocks)
    seen = np.zeros(nb, dtype=np.int64)
    for c, idx in enumerate(res.classes):
        idx = np.asarray(idx)
        np.add.at(seen, idx, 1)
        pts = np.asarray(td.blocks)[idx].ravel()
        if len(pts) != td.num_points or len(np.unique(pts)) != td.num_points:
            return Verdict.fail(f"class {c} is not a parallel class", parallel_class=c)
    if (seen != 1).any():
        return Verdict.fail(f"{int((seen != 1).sum())} blocks not in exactly one class")
    return Verdict(True, f"{len(res.classes)} parallel classes of {nb // max(1, len(res.classes))} blocks")


# -- geometric views ------------------------------------------------------------------

def _require_flat(space: ProjectiveSpace, pts, dim: int, what: str) -> np.ndarray:
    pts = np.unique(np.asarray(pts, dtype=np.int64))
    if len(pts) == 0 or space.rank_of(pts.tolist()) != dim + 1 \
            or len(pts) != gaussian_binomial(dim + 1, 1, space.q):
        raise ValueError(f"not a {what} ({dim}-flat) of {space!r}")
    return pts


@dataclass
class PencilDecomposition:
    sub: np.ndarray
    hyperplanes: list[np.ndarray]
    A: np.ndarray           # lines disjoint from sub
    B: list[np.ndarray]     # lines of hyperplane i not inside sub
    C: np.ndarray           # lines inside sub


def hyperplane_pencil_decomposition(space: ProjectiveSpace, sub) -> PencilDecomposition:
    """The q+1 hyperplanes through an (n-2)-flat and the induced split of
    the lines; every line lands in exactly one of A, B_0..B_q, C."""
    n, q = space.n, space.q
    sub = _require_flat(space, sub, n - 2, "codimension-2 flat")
    s = scalars(q)
    basis = space.basis_of(sub.tolist())
    ext = extend_to_basis(basis, space.N, s)
    e, f = ext[len(basis)], ext[len(basis) + 1]
    codes = [space.vs.pack(b) for b in basis]
    pe, pf = space.vs.pack(e), space.vs.pack(f)
    dirs = [space.vs.add(pe, space.vs.scale(lam, pf)) for lam in range(q)] + [pf]
    hyps = [space.span_points(codes + [int(d)]) for d in dirs]
    in_sub = np.zeros(space.v, dtype=bool)
    in_sub[sub] = True
    C = space.lines_inside(in_sub)
    A = np.setdiff1d(np.arange(space.num_lines), space.lines_meeting(in_sub))
    B = []
    for h in hyps:
        mask = np.zeros(space.v, dtype=bool)
        mask[h] = True
        B.append(np.setdiff1d(space.lines_inside(mask), C))
    return PencilDecomposition(sub, hyps, A, B, C)


def verify_pencil(space: ProjectiveSpace, dec: PencilDecomposition) -> Verdict:
    q = space.q
    if len(dec.hyperplanes) != q + 1:
        return Verdict.fail(f"{len(dec.hyperplanes)} hyperplanes, need {q + 1}")
    for i in range(q + 1):
        if len(dec.hyperplanes[i]) != gaussian_binomial(space.n, 1, q):
            return Verdict.fail(f"member {i} is not a hyperplane")
        for j in range(i):
            inter = np.intersect1d(dec.hyperplanes[i], dec.hyperplanes[j])
            if not np.array_equal(inter, dec.sub):
                return Verdict.fail(f"hyperplanes {j} and {i} meet outside the common flat")
    counts = np.zeros(space.num_lines, dtype=np.int64)
    for part in [dec.A, dec.C, *dec.B]:
        np.add.at(counts, part, 1)
    if (counts != 1).any():
        return Verdict.fail(f"{int((counts != 1).sum())} lines not covered exactly once")
    return Verdict(True, f"{q + 1} hyperplanes through a common {space.n - 2}-flat")


def incidence_count_hyperplane(space: ProjectiveSpace, hyperplane) -> int:
    """Number of lines meeting a hyperplane (always all of them)."""
    hyp = _require_flat(space, hyperplane, space.n - 1, "hyperplane")
    mask = np.zeros(space.v, dtype=bool)
    mask[hyp] = True
    return int(len(space.lines_meeting(mask)))


def tpg_by_removal(space: ProjectiveSpace, sub) -> TransversalDesign:
    """Delete an (n-2)-flat and every line meeting it.  Groups are the
    hyperplanes through the flat, minus the flat; ``labels`` maps design
    points back to points of ``space``."""
    dec = hyperplane_pencil_decomposition(space, sub)
    k = space.q + 1
    groups = [np.setdiff1d(h, dec.sub) for h in dec.hyperplanes]
    m = len(groups[0])
    labels = np.concatenate(groups)
    relabel = np.full(space.v, -1, dtype=np.int64)
    relabel[labels] = np.arange(len(labels))
    blocks = relabel[space.line_points[dec.A]]
    order = np.argsort(blocks // m, axis=1)
    blocks = np.take_along_axis(blocks, order, axis=1)
    return TransversalDesign(k, m, blocks, labels=labels)


def embed_tpg(n: int, q: int, space: ProjectiveSpace | None = None) -> tuple[ProjectiveSpace, np.ndarray, np.ndarray]:
    """Place built TPG(n,q) in PG(n,q) with coordinates (w, u), w in GF(q)^2.

    Group lam < q is the point w = (1, lam), group q is w = (0, 1).
    Returns the space, design point -> space point, and block -> line id.
    """
    k, m = tpg_params(n, q)
    if space is None:
        space = build_space(n, q, "product", components=(2, n - 1))
    vs = space.vs
    u = np.arange(m, dtype=np.int64)
    pts = []
    for g in range(k):
        w = vs.pack([1, g] + [0] * (n - 1)) if g < q else vs.pack([0, 1] + [0] * (n - 1))
        pts.append(space.point_of_vec[vs.add(w, u * q * q)])
    labels = np.concatenate(pts)
    td = build_tpg(n, q)
    b = labels[td.blocks]
    return space, labels, space.pair_line[b[:, 0], b[:, 1]]
