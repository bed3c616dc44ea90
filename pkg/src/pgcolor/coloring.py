"""Line colorings: chromatic-index targets, the proper-coloring verifier,
color-budget bookkeeping and property R certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .space import ProjectiveSpace, gaussian_binomial
from .spreads import as_line_ids, max_partial_spread_size, verify_parallelism
from .verdict import Verdict

UNCOLORED = -1


def target_chromatic_index(n: int, q: int) -> int:
    """c(n,q): [n 1]_q for odd n, [n 1]_q + q + 1 for even n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1
    if n == 2:
        return q * q + q + 1  # any two lines of a plane meet
    base = gaussian_binomial(n, 1, q)
    return base if n % 2 else base + q + 1


def lower_bound(n: int, q: int) -> int:
    """ceil(#lines / largest partial spread): every color class is a partial spread."""
    if n == 1:
        return 1
    lines = gaussian_binomial(n + 1, 2, q)
    mu = max_partial_spread_size(n, q)
    return -(-lines // mu)


@dataclass
class Coloring:
    """Color per line id (``UNCOLORED`` = -1) with a declared palette size."""

    space: ProjectiveSpace
    colors: np.ndarray
    palette: int

    @classmethod
    def empty(cls, space: ProjectiveSpace, palette: int) -> "Coloring":
        return cls(space, np.full(space.num_lines, UNCOLORED, dtype=np.int64), palette)

    @classmethod
    def from_classes(cls, space: ProjectiveSpace, classes, palette: int | None = None) -> "Coloring":
        out = cls.empty(space, len(classes) if palette is None else palette)
        for c, lines in enumerate(classes):
            ids = as_line_ids(space, lines)
            if (out.colors[ids] != UNCOLORED).any():
                raise ValueError(f"class {c} repeats an already colored line")
            out.colors[ids] = c
        return out

    def classes(self) -> list[np.ndarray]:
        order = np.argsort(self.colors, kind="stable")
        sc = self.colors[order]
        bounds = np.searchsorted(sc, np.arange(self.palette + 1))
        return [order[bounds[c]:bounds[c + 1]] for c in range(self.palette)]

    def used(self) -> np.ndarray:
        return np.unique(self.colors[self.colors >= 0])

    def copy(self) -> "Coloring":
        return Coloring(self.space, self.colors.copy(), self.palette)


def verify_coloring(space: ProjectiveSpace, coloring: Coloring, domain=None) -> Verdict:
    """Proper iff every line in ``domain`` (default: all lines) is colored
    within the palette and no two lines through a point share a color.
    Lines outside ``domain`` must be uncolored."""
    colors = np.asarray(coloring.colors)
    if len(colors) != space.num_lines:
        return Verdict.fail(f"coloring has {len(colors)} entries, space has {space.num_lines} lines")
    need = np.ones(space.num_lines, dtype=bool) if domain is None else np.zeros(space.num_lines, dtype=bool)
    if domain is not None:
        need[np.asarray(domain, dtype=np.int64)] = True
    missing = np.flatnonzero(need & (colors < 0))
    if len(missing):
        return Verdict.fail(f"{len(missing)} lines uncolored, first {space.lines_of([missing[0]])[0]}",
                            uncolored=missing.tolist())
    extra = np.flatnonzero(~need & (colors >= 0))
    if len(extra):
        return Verdict.fail(f"{len(extra)} lines outside the domain are colored", extra=extra.tolist())
    if (colors >= coloring.palette).any():
        return Verdict.fail(f"color {int(colors.max())} outside palette {coloring.palette}")
    pl = space.point_lines
    c = colors[pl]
    c = np.where(c < 0, -1 - np.arange(pl.shape[1])[None, :], c)  # uncolored never clash
    order = np.argsort(c, axis=1, kind="stable")
    cs = np.take_along_axis(c, order, axis=1)
    clash = cs[:, 1:] == cs[:, :-1]
    if clash.any():
        p, k = map(int, np.argwhere(clash)[0])
        l1, l2 = int(pl[p, order[p, k]]), int(pl[p, order[p, k + 1]])
        return Verdict.fail(f"lines {space.lines_of([l1])[0]} and {space.lines_of([l2])[0]} meet in "
                            f"point {p} and share color {int(cs[p, k])}", lines=(l1, l2), point=p,
                            color=int(cs[p, k]))
    used = len(np.unique(colors[colors >= 0]))
    return Verdict(True, f"proper coloring of {int(need.sum())} lines with {used} colors "
                         f"(palette {coloring.palette})", {"used": used})


def verify_parallelism_coloring(space: ProjectiveSpace, coloring: Coloring) -> Verdict:
    """For odd n: every color class is a spread."""
    return verify_parallelism(space, coloring.classes())


# -- color budget -----------------------------------------------------------------------

@dataclass
class ColorBudget:
    """Dense color ranges for one recursion level.

    Groups i = 0..q^2 own C_i = [i*c1, (i+1)*c1); C* is the tail
    [(q^2+1)*c1, c(n,q)).  C_i splits into q+1 runs C_i^j of q^(n-4) colors.
    """

    n: int
    q: int

    @property
    def total(self) -> int:
        return target_chromatic_index(self.n, self.q)

    @property
    def groups(self) -> int:
        return self.q * self.q + 1

    @property
    def c1(self) -> int:
        return self.q ** (self.n - 4) * (self.q + 1)

    @property
    def c2(self) -> int:
        return target_chromatic_index(self.n - 2, self.q) - self.c1

    @property
    def split_size(self) -> int:
        return self.q ** (self.n - 4)

    def C(self, i: int) -> np.ndarray:
        return np.arange(i * self.c1, (i + 1) * self.c1)

    def star(self) -> np.ndarray:
        return np.arange(self.groups * self.c1, self.total)

    def split(self, i: int, j: int) -> np.ndarray:
        s = self.split_size
        return np.arange(i * self.c1 + j * s, i * self.c1 + (j + 1) * s)

    def audit(self) -> Verdict:
        ok = self.groups * self.c1 + self.c2 == self.total
        sets = [self.C(i) for i in range(self.groups)] + [self.star()]
        allc = np.concatenate(sets)
        disjoint = len(np.unique(allc)) == len(allc) == self.total
        splits_ok = all(
            np.array_equal(np.concatenate([self.split(i, j) for j in range(self.q + 1)]), self.C(i))
            for i in range(self.groups))
        if not (ok and disjoint and splits_ok):
            return Verdict.fail(f"budget audit failed: (q^2+1)c1+c2={self.groups * self.c1 + self.c2}, "
                                f"c(n,q)={self.total}")
        return Verdict(True, f"(q^2+1)*{self.c1} + {self.c2} = {self.total}")

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "c1": self.c1, "c2": self.c2, "total": self.total,
                "C": [[int(self.C(i)[0]), int(self.C(i)[-1]) + 1] for i in range(self.groups)],
                "Cstar": [int(self.groups * self.c1), int(self.total)], "splitSize": self.split_size}


# -- property R -------------------------------------------------------------------------

@dataclass
class PropertyRCertificate:
    """A coloring of IPG(n,q;n-2): all lines except those inside ``flat``.

    ``incident`` lists the colors allowed on lines meeting the flat.
    """

    space: ProjectiveSpace
    flat: np.ndarray
    coloring: Coloring
    incident: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.space.n

    def flat_mask(self) -> np.ndarray:
        m = np.zeros(self.space.v, dtype=bool)
        m[self.flat] = True
        return m


def incident_color_count(n: int, q: int) -> int:
    return q ** (n - 2) * (q + 1)


def verify_property_r(cert: PropertyRCertificate) -> Verdict:
    space, n, q = cert.space, cert.space.n, cert.space.q
    flat = np.unique(np.asarray(cert.flat, dtype=np.int64))
    if len(flat) != gaussian_binomial(n - 1, 1, q) or space.rank_of(flat.tolist()) != n - 1:
        return Verdict.fail(f"distinguished set is not an {n - 2}-flat")
    mask = cert.flat_mask()
    inside = space.lines_inside(mask)
    domain = np.setdiff1d(np.arange(space.num_lines), inside)
    v = verify_coloring(space, cert.coloring, domain)
    if not v:
        return v
    if cert.coloring.palette != target_chromatic_index(n, q):
        return Verdict.fail(f"palette {cert.coloring.palette} is not c({n},{q}) = "
                            f"{target_chromatic_index(n, q)}")
    meet = np.setdiff1d(space.lines_meeting(mask), inside)
    used = np.unique(cert.coloring.colors[meet])
    allowed = np.unique(np.asarray(cert.incident, dtype=np.int64))
    want = incident_color_count(n, q)
    if len(allowed) != want:
        return Verdict.fail(f"{len(allowed)} incident colors declared, need {want}")
    stray = np.setdiff1d(used, allowed)
    if len(stray):
        return Verdict.fail(f"{len(stray)} colors outside the declared set appear on incident lines",
                            colors=stray.tolist())
    if len(used) != want:
        return Verdict.fail(f"incident lines use {len(used)} colors, need exactly {want}")
    return Verdict(True, f"IPG({n},{q};{n - 2}) colored with {cert.coloring.palette} colors, "
                         f"{want} on lines meeting the flat")


def color_ipg3(space: ProjectiveSpace, parallelism, line) -> tuple[Coloring, PropertyRCertificate]:
    """The parallelism as a (q^2+q+1)-coloring of PG(3,q), and the induced
    IPG(3,q;1) certificate for ``line`` (a line id or point tuple)."""
    if space.n != 3:
        raise ValueError("color_ipg3 needs PG(3,q)")
    v = verify_parallelism(space, parallelism)
    if not v:
        raise ValueError(f"invalid parallelism: {v.message}")
    lid = int(as_line_ids(space, [line])[0])
    full = Coloring.from_classes(space, parallelism)
    own = int(full.colors[lid])
    ipg = full.copy()
    ipg.colors[lid] = UNCOLORED
    incident = np.array([c for c in range(full.palette) if c != own], dtype=np.int64)
    flat = np.asarray(space.line_points[lid], dtype=np.int64)
    return full, PropertyRCertificate(space, flat, ipg, incident)
