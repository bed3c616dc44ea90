"""PG(n,q) in two concrete coordinate models.

* ``singer``: points are the exponents 0..v-1 of a primitive element of
  GF(q^(n+1)); point ``i`` is the class of x^i.
* ``product``: points are normalized vectors of GF(q)^(n+1), the coordinates
  grouped into components (by default GF(q^2) x GF(q^2) x GF(q^(n-3))).  The
  canonical representative has its first nonzero coordinate equal to 1.

In both models a vector is an integer code with base-q digits (coordinate 0
least significant) and lines are sorted point tuples numbered in
lexicographic order.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .field import FieldTower, _digit_add, base_field, prime_power
from .linalg import extend_to_basis, inverse, matmul, rank, rref, scalars

MAX_PAIR_TABLE_POINTS = 8192


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of GF(q)^a."""
    if b < 0 or a < 0:
        raise ValueError("negative argument")
    if b > a:
        raise ValueError(f"b={b} exceeds a={a}")
    num = den = 1
    for i in range(1, b + 1):
        num *= q ** (a - b + i) - 1
        den *= q ** i - 1
    return num // den


class VectorSpace:
    """GF(q)^dim with vectors packed as integer codes."""

    def __init__(self, q: int, dim: int):
        self.q, self.dim = q, dim
        self.base = base_field(q)
        self.size = q ** dim
        codes = np.arange(self.size, dtype=np.int64)
        mul = self.base.mul_table()
        self.scale_tab = np.zeros((q, self.size), dtype=np.int64)
        self._digits = np.stack([codes // q ** i % q for i in range(dim)]) if dim else np.zeros((0, 1))
        for lam in range(q):
            acc = np.zeros(self.size, dtype=np.int64)
            for i in range(dim):
                acc += mul[lam][self._digits[i]] * q ** i
            self.scale_tab[lam] = acc

    def add(self, a, b):
        if self.base.p == 2:
            return np.bitwise_xor(a, b)
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            return int(_digit_add(np.array(a), np.array(b), self.base.p, self.base.m * self.dim))
        return _digit_add(np.asarray(a), np.asarray(b), self.base.p, self.base.m * self.dim)

    def scale(self, lam, a):
        return self.scale_tab[lam, a]

    def digit(self, a, i: int):
        return self._digits[i][a]

    def coords(self, a: int) -> list[int]:
        return [int(a) // self.q ** i % self.q for i in range(self.dim)]

    def pack(self, coords: Sequence[int]) -> int:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return sum(int(c) * self.q ** i for i, c in enumerate(coords))


class ProjectiveSpace:
    """A built PG(n,q).  Use :func:`build_space`."""

    def __init__(self, n: int, q: int, model: str, vs: VectorSpace, vec: np.ndarray,
                 point_of_vec: np.ndarray, tower: FieldTower | None = None,
                 components: tuple[int, ...] | None = None):
        self.n, self.q, self.model = n, q, model
        self.vs = vs
        self.vec = vec
        self.point_of_vec = point_of_vec
        self.tower = tower
        self.components = components

    def __repr__(self) -> str:
        return f"PG({self.n},{self.q})[{self.model}]"

    @property
    def N(self) -> int:
        return self.n + 1

    @property
    def v(self) -> int:
        return len(self.vec)

    @property
    def k(self) -> int:
        return self.q + 1

    @property
    def lines_per_point(self) -> int:
        return gaussian_binomial(self.n, 1, self.q)

    @property
    def num_lines(self) -> int:
        return gaussian_binomial(self.n + 1, 2, self.q)

    def describe(self) -> dict:
        d = {"n": self.n, "q": self.q, "model": self.model}
        if self.tower is not None:
            d["poly"] = list(self.tower.big.poly)
        if self.components is not None:
            d["components"] = list(self.components)
        return d

    # -- points --
    def coords(self, point: int) -> list[int]:
        return self.vs.coords(int(self.vec[point]))

    def point_of(self, coords: Sequence[int]) -> int:
        code = self.vs.pack(coords)
        if code == 0:
            raise ValueError("the zero vector is not a point")
        return int(self.point_of_vec[code])

    def line_through(self, x: int, y: int) -> tuple[int, ...]:
        """The q+1 points {x, y, x+y, x+a*y, ...} as a sorted tuple."""
        if x == y:
            raise ValueError("a line needs two distinct points")
        vx, vy = int(self.vec[x]), int(self.vec[y])
        lams = np.arange(self.q)
        pts = self.point_of_vec[self.vs.add(vx, self.vs.scale(lams, vy))]
        return tuple(sorted([int(y), *map(int, pts)]))

    # -- lines --
    @cached_property
    def line_points(self) -> np.ndarray:
        """(num_lines, q+1) array of sorted point tuples, rows sorted."""
        v, q = self.v, self.q
        out = []
        lams = np.arange(q)
        for x in range(v - 1):
            ys = np.arange(x + 1, v)
            vx = self.vec[x]
            rows = self.point_of_vec[self.vs.add(self.vec[ys][:, None], self.vs.scale(lams, vx)[None, :])]
            keep = (rows.min(axis=1) == ys)
            if not keep.any():
                continue
            rows = np.sort(rows[keep], axis=1)
            out.append(np.hstack([np.full((len(rows), 1), x), rows]))
        lp = np.vstack(out).astype(np.int32) if out else np.zeros((0, q + 1), dtype=np.int32)
        if len(lp) != self.num_lines:
            raise AssertionError(f"enumerated {len(lp)} lines, expected {self.num_lines}")
        return lp

    @cached_property
    def pair_line(self) -> np.ndarray:
        """v x v table: line id through two points (-1 on the diagonal)."""
        if self.v > MAX_PAIR_TABLE_POINTS:
            raise MemoryError(f"{self!r} has {self.v} points; pair table capped at {MAX_PAIR_TABLE_POINTS}")
        lp = self.line_points
        t = np.full((self.v, self.v), -1, dtype=np.int32)
        ids = np.arange(len(lp), dtype=np.int32)
        for i in range(self.k):
            for j in range(self.k):
                if i != j:
                    t[lp[:, i], lp[:, j]] = ids
        return t

    @cached_property
    def point_lines(self) -> np.ndarray:
        """(v, lines_per_point) array of the line ids through each point."""
        lp = self.line_points
        flat = lp.ravel()
        order = np.argsort(flat, kind="stable")
        return (order // self.k).astype(np.int32).reshape(self.v, -1)

    def all_lines(self) -> np.ndarray:
        return self.line_points

    def line_id(self, points: Iterable[int]) -> int:
        pts = sorted(int(p) for p in points)
        if len(pts) != self.k or len(set(pts)) != self.k:
            raise KeyError(f"{pts} is not a line of {self!r}")
        if min(pts) < 0 or max(pts) >= self.v:
            raise KeyError(f"{pts} has points outside {self!r}")
        lid = int(self.pair_line[pts[0], pts[1]])
        if tuple(int(p) for p in self.line_points[lid]) != tuple(pts):
            raise KeyError(f"{pts} is not a line of {self!r}")
        return lid

    def line_ids(self, lines: Iterable[Sequence[int]]) -> np.ndarray:
        return np.array([self.line_id(l) for l in lines], dtype=np.int64)

    def lines_of(self, ids) -> list[tuple[int, ...]]:
        return [tuple(int(p) for p in self.line_points[i]) for i in ids]

    # -- subspaces --
    def subspace_points(self, generators: Sequence[int]) -> np.ndarray:
        """Sorted points of the span of the given points."""
        if len(generators) == 0:
            raise ValueError("need at least one generator")
        s = scalars(self.q)
        basis, _ = rref([self.coords(g) for g in generators], s)
        return self.span_points([self.vs.pack(b) for b in basis])

    def span_points(self, basis_codes: Sequence[int]) -> np.ndarray:
        r = len(basis_codes)
        combos = np.arange(1, self.q ** r, dtype=np.int64)
        acc = np.zeros(len(combos), dtype=np.int64)
        for i, b in enumerate(basis_codes):
            acc = self.vs.add(acc, self.vs.scale(combos // self.q ** i % self.q, b))
        return np.unique(self.point_of_vec[acc])

    def rank_of(self, points: Sequence[int]) -> int:
        return rank([self.coords(p) for p in points], scalars(self.q))

    def basis_of(self, points: Sequence[int]) -> list[list[int]]:
        """A basis (coordinate lists) of the span of ``points``, chosen greedily."""
        s = scalars(self.q)
        out: list[list[int]] = []
        for p in points:
            c = self.coords(p)
            if rank(out + [c], s) > len(out):
                out.append(c)
        return out

    def lines_inside(self, mask: np.ndarray) -> np.ndarray:
        """Ids of lines all of whose points satisfy the boolean point mask."""
        return np.nonzero(mask[self.line_points].all(axis=1))[0]

    def lines_meeting(self, mask: np.ndarray) -> np.ndarray:
        return np.nonzero(mask[self.line_points].any(axis=1))[0]


def _normalized_points(vs: VectorSpace) -> tuple[np.ndarray, np.ndarray]:
    q, dim = vs.q, vs.dim
    codes = np.arange(1, vs.size, dtype=np.int64)
    lead = np.zeros(len(codes), dtype=np.int64)
    found = np.zeros(len(codes), dtype=bool)
    for i in range(dim):
        d = vs.digit(codes, i)
        new = (~found) & (d != 0)
        lead[new] = d[new]
        found |= new
    inv = np.array([0] + [vs.base.inv_code(a) for a in range(1, q)])
    canon = vs.scale(inv[lead], codes)
    reps = np.unique(canon)
    point_of_vec = np.full(vs.size, -1, dtype=np.int64)
    point_of_vec[codes] = np.searchsorted(reps, canon)
    return reps, point_of_vec


def build_space(n: int, q: int, model: str = "singer", poly: tuple[int, ...] | None = None,
                components: Sequence[int] | None = None) -> ProjectiveSpace:
    """Build PG(n,q) in the ``singer`` or ``product`` model."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prime_power(q)
    N = n + 1
    if model == "singer":
        tower = FieldTower(q, N, poly)
        vs = VectorSpace(q, N)
        v = tower.v
        vec = tower.vec_of_log[:v].copy()
        point_of_vec = np.full(vs.size, -1, dtype=np.int64)
        point_of_vec[tower.vec_of_log] = np.arange(tower.big.q1) % v
        return ProjectiveSpace(n, q, "singer", vs, vec, point_of_vec, tower=tower)
    if model == "product":
        if components is None:
            if n < 3:
                raise ValueError("the product model needs n >= 3")
            components = tuple(c for c in (2, 2, n - 3) if c)
        components = tuple(int(c) for c in components)
        if sum(components) != N or min(components) < 1:
            raise ValueError(f"components {components} do not sum to n+1={N}")
        vs = VectorSpace(q, N)
        vec, point_of_vec = _normalized_points(vs)
        return ProjectiveSpace(n, q, "product", vs, vec, point_of_vec, components=components)
    raise ValueError(f"unknown model {model!r}")


def space_from_json(d: dict) -> ProjectiveSpace:
    return build_space(int(d["n"]), int(d["q"]), d.get("model", "singer"),
                       tuple(d["poly"]) if d.get("poly") else None,
                       tuple(d["components"]) if d.get("components") else None)


# -----------------------------------------------------------------------------

class PointMap:
    """Point map src -> dst induced by an injective linear map."""

    def __init__(self, src: ProjectiveSpace, dst: ProjectiveSpace, images: Sequence[int], table: np.ndarray):
        self.src, self.dst, self.images, self.table = src, dst, list(images), table

    def __call__(self, pts):
        return self.table[pts]

    def map_lines(self, line_ids) -> np.ndarray:
        lp = self.src.line_points[np.asarray(line_ids)]
        return self.dst.pair_line[self.table[lp[..., 0]], self.table[lp[..., 1]]]


def linear_embedding(src: ProjectiveSpace, dst: ProjectiveSpace,
                     basis_images: Sequence[Sequence[int] | int]) -> PointMap:
    """Map e_k of ``src`` to ``basis_images[k]`` (dst coordinate lists or codes)."""
    if src.q != dst.q:
        raise ValueError("spaces over different fields")
    if len(basis_images) != src.N:
        raise ValueError(f"need {src.N} basis images, got {len(basis_images)}")
    codes = [int(b) if isinstance(b, (int, np.integer)) else dst.vs.pack(b) for b in basis_images]
    s = scalars(src.q)
    if rank([dst.vs.coords(c) for c in codes], s) != src.N:
        raise ValueError("basis images are linearly dependent")
    acc = np.zeros(src.v, dtype=np.int64)
    for k, img in enumerate(codes):
        acc = dst.vs.add(acc, dst.vs.scale(src.vs.digit(src.vec, k), img))
    return PointMap(src, dst, codes, dst.point_of_vec[acc])


def linear_isomorphism(src: ProjectiveSpace, dst: ProjectiveSpace,
                       basis_images: Sequence[Sequence[int] | int]) -> PointMap:
    """Point bijection induced by a linear isomorphism between two PG(n,q)."""
    if (src.n, src.q) != (dst.n, dst.q):
        raise ValueError("dimension or field mismatch")
    return linear_embedding(src, dst, basis_images)


def adapted_embedding(src: ProjectiveSpace, src_sub: Sequence[int], dst: ProjectiveSpace,
                      sub_images: Sequence[Sequence[int]], rest_images: Sequence[Sequence[int]]) -> PointMap:
    """Linear embedding sending the span of ``src_sub`` onto span(sub_images)
    and a complement onto span(rest_images).

    ``sub_images`` must have the same size as a basis of span(src_sub); the
    complement of that basis in ``src`` is filled from the standard basis.
    """
    s = scalars(src.q)
    sub_basis = src.basis_of(src_sub)
    if len(sub_basis) != len(sub_images):
        raise ValueError("subspace dimension mismatch")
    full = extend_to_basis(sub_basis, src.N, s)
    if len(full) - len(sub_basis) != len(rest_images):
        raise ValueError("complement dimension mismatch")
    # rows of B are the adapted basis, so e_j maps to row j of B^-1 . images
    binv = inverse(full, s)
    imgs = [list(r) for r in sub_images] + [list(r) for r in rest_images]
    std_images = matmul(binv, imgs, s)
    return linear_embedding(src, dst, std_images)

