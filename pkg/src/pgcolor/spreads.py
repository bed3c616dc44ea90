"""Spreads, partial spreads and parallelisms: verifiers and searches."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

import numpy as np

from .exact_cover import DLX, BudgetExceeded
from .orbits import orbit_partition
from .space import ProjectiveSpace, gaussian_binomial
from .verdict import SearchOutcome, Verdict


def as_line_ids(space: ProjectiveSpace, lines) -> np.ndarray:
    """Accept line ids or point tuples; return an int array of line ids."""
    out = []
    for l in lines:
        if isinstance(l, (int, np.integer)):
            if not 0 <= int(l) < space.num_lines:
                raise KeyError(f"unknown line id {l}")
            out.append(int(l))
        else:
            out.append(space.line_id(l))
    return np.array(out, dtype=np.int64)


def spread_size(n: int, q: int) -> int:
    return gaussian_binomial(n + 1, 1, q) // (q + 1)


# -- verifiers ----------------------------------------------------------------

def verify_partial_spread(space: ProjectiveSpace, lines) -> Verdict:
    ids = as_line_ids(space, lines)
    owner = np.full(space.v, -1, dtype=np.int64)
    for lid in ids:
        pts = space.line_points[lid]
        hit = owner[pts]
        if (hit >= 0).any():
            k = int(np.argmax(hit >= 0))
            other = int(hit[k])
            return Verdict.fail(
                f"lines {space.lines_of([other])[0]} and {space.lines_of([lid])[0]} meet in point {int(pts[k])}",
                lines=(other, int(lid)), point=int(pts[k]))
        owner[pts] = lid
    return Verdict(True, f"{len(ids)} pairwise disjoint lines")


def verify_spread(space: ProjectiveSpace, lines) -> Verdict:
    ids = as_line_ids(space, lines)
    verdict = verify_partial_spread(space, ids)
    if not verdict:
        return verdict
    want = space.v // space.k
    if space.v % space.k or len(ids) != want:
        return Verdict.fail(f"{len(ids)} lines, a spread of {space!r} needs {space.v / space.k:g}",
                            size=len(ids))
    return Verdict(True, f"spread of {len(ids)} lines")


def verify_parallelism(space: ProjectiveSpace, spreads) -> Verdict:
    """True iff ``spreads`` are spreads partitioning the lines of ``space``."""
    counts = np.zeros(space.num_lines, dtype=np.int64)
    bad = []
    for i, s in enumerate(spreads):
        ids = as_line_ids(space, s)
        v = verify_spread(space, ids)
        if not v:
            bad.append((i, v.message))
        np.add.at(counts, ids, 1)
    missing = np.nonzero(counts == 0)[0]
    duplicated = np.nonzero(counts > 1)[0]
    details = {"spreads": len(spreads), "missing": missing.tolist(),
               "duplicated": duplicated.tolist(), "bad_spreads": bad}
    if bad or len(missing) or len(duplicated):
        parts = []
        if bad:
            parts.append(f"{len(bad)} members are not spreads (first: #{bad[0][0]}: {bad[0][1]})")
        if len(missing):
            parts.append(f"{len(missing)} missing lines")
        if len(duplicated):
            parts.append(f"{len(duplicated)} duplicated lines")
        return Verdict(False, "; ".join(parts), details)
    size = spread_size(space.n, space.q) if space.n % 2 else 0
    return Verdict(True, f"{len(spreads)} spreads × {size} lines", details)


# -- bounds -------------------------------------------------------------------

def max_partial_spread_size(n: int, q: int) -> int:
    """Largest number of pairwise disjoint lines in PG(n,q), n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n % 2:
        return gaussian_binomial(n + 1, 1, q) // (q + 1)
    return (q ** (n + 1) - q ** 3 + q * q - 1) // (q * q - 1)


def _line_masks(space: ProjectiveSpace, ids=None) -> list[int]:
    lp = space.line_points if ids is None else space.line_points[np.asarray(ids)]
    return [sum(1 << int(p) for p in row) for row in lp]


def brute_force_max_partial_spread(space: ProjectiveSpace, budget: int | None = None) -> tuple[int, list[int]]:
    """Exhaustive maximum partial spread: try sizes from v//(q+1) downward.

    At each node the least undecided point is either covered by a line or
    declared uncovered; a size ``t`` allows at most v - t(q+1) uncovered points.
    """
    masks = _line_masks(space)
    cands = [list(map(int, row)) for row in space.point_lines]
    v, k = space.v, space.k
    full = (1 << v) - 1
    nodes = 0

    def rec(done: int, covered: int, waste: int, chosen: list[int], t: int) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(nodes)
        if len(chosen) == t:
            return list(chosen)
        free = ~done & full
        p = (free & -free).bit_length() - 1
        for lid in cands[p]:
            if not masks[lid] & done:
                chosen.append(lid)
                got = rec(done | masks[lid], covered | masks[lid], waste, chosen, t)
                chosen.pop()
                if got:
                    return got
        if waste > 0:
            return rec(done | (1 << p), covered, waste - 1, chosen, t)
        return None

    for t in range(v // k, 0, -1):
        found = rec(0, 0, v - t * k, [], t)
        if found:
            return t, found
    return 0, []


# -- spread search --------------------------------------------------------------

class _CoverSearch:
    """Bitset exact cover of all points by lines, with optional per-group caps.

    Branches on the uncovered point with the fewest usable lines (ties to the
    least point), trying lines in increasing id (or a seeded shuffle).
    """

    def __init__(self, space: ProjectiveSpace, allowed=None, group_of=None, caps=None,
                 seed: int | None = None, order: str = "mrv"):
        self.space = space
        n_lines = space.num_lines
        allowed_mask = np.ones(n_lines, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
        self.masks = _line_masks(space)
        rng = random.Random(seed) if seed is not None else None
        self.cands = []
        for row in space.point_lines:
            c = [int(l) for l in row if allowed_mask[l]]
            if rng is not None:
                rng.shuffle(c)
            self.cands.append(c)
        self.full = (1 << space.v) - 1
        self.group_of = group_of
        self.caps = caps
        self.order = order
        self.nodes = 0

    def solutions(self, forced: Sequence[int] = (), budget: int | None = None) -> Iterator[list[int]]:
        masks, cands, full = self.masks, self.cands, self.full
        group_of, caps = self.group_of, self.caps
        counts = [0] * (len(caps) if caps is not None else 0)
        covered = 0
        for lid in forced:
            if masks[lid] & covered:
                return
            covered |= masks[lid]
            if caps is not None:
                counts[group_of[lid]] += 1
        if caps is not None and any(c > m for c, m in zip(counts, caps)):
            return
        chosen = list(forced)

        def usable(lid: int, cov: int) -> bool:
            if masks[lid] & cov:
                return False
            return caps is None or counts[group_of[lid]] < caps[group_of[lid]]

        def rec(cov: int) -> Iterator[list[int]]:
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise BudgetExceeded(self.nodes)
            if cov == full:
                yield list(chosen)
                return
            free = ~cov & full
            if self.order == "first":
                p = (free & -free).bit_length() - 1
                best = [l for l in cands[p] if usable(l, cov)]
            else:
                best = None
                while free:
                    low = free & -free
                    p = low.bit_length() - 1
                    free ^= low
                    opts = [l for l in cands[p] if usable(l, cov)]
                    if best is None or len(opts) < len(best):
                        best = opts
                        if len(best) <= 1:
                            break
            for lid in best:
                chosen.append(lid)
                if caps is not None:
                    counts[group_of[lid]] += 1
                yield from rec(cov | masks[lid])
                if caps is not None:
                    counts[group_of[lid]] -= 1
                chosen.pop()

        yield from rec(covered)


def short_orbit_base_line(space: ProjectiveSpace) -> int:
    """Id of the short-orbit line through point 0 in Singer PG(3,q)."""
    q = space.q
    return space.line_id([j * (q * q + 1) for j in range(q + 1)])


def withE_profile(space: ProjectiveSpace) -> tuple[np.ndarray, list[int]]:
    """Group index per line and caps: 1 short-orbit line, q per full orbit."""
    if space.model != "singer" or space.n != 3:
        raise ValueError("the withE orbit profile needs Singer-model PG(3,q)")
    part = orbit_partition(space)
    caps = [1] * len(part.short) + [space.q] * len(part.full)
    return part.orbit_of(), caps


def search_spread(space: ProjectiveSpace, contains: Sequence = (), profile: str | None = None,
                  budget: int | None = None, seed: int | None = None, order: str = "mrv") -> SearchOutcome:
    """Find a spread containing ``contains`` and, with ``profile='withE'``,
    consisting of the short-orbit line through 0 plus q lines of each full
    Singer orbit."""
    forced = [int(x) for x in as_line_ids(space, contains)]
    group_of = caps = None
    if profile == "withE":
        group_of, caps = withE_profile(space)
        base = short_orbit_base_line(space)
        if base not in forced:
            forced.append(base)
    elif profile is not None:
        raise ValueError(f"unknown profile {profile!r}")
    if not verify_partial_spread(space, forced):
        return SearchOutcome("infeasible", None, 0)
    search = _CoverSearch(space, group_of=group_of, caps=caps, seed=seed, order=order)
    try:
        for sol in search.solutions(forced, budget):
            return SearchOutcome("found", sorted(sol), search.nodes)
    except BudgetExceeded:
        return SearchOutcome("exhausted", None, search.nodes)
    return SearchOutcome("infeasible", None, search.nodes)


def count_spreads_backtrack(space: ProjectiveSpace, through: int) -> int:
    search = _CoverSearch(space, order="first")
    return sum(1 for _ in search.solutions([through]))


def count_spreads_dlx(space: ProjectiveSpace, through: int) -> int:
    dlx = DLX(space.v, [list(map(int, row)) for row in space.line_points])
    dlx.select(through)
    return sum(1 for _ in dlx.solutions())


# -- parallelism search ----------------------------------------------------------

def _subgroup_orbits(space: ProjectiveSpace, shift: int) -> tuple[np.ndarray, np.ndarray]:
    """Line -> orbit index under translations by multiples of ``shift``, and
    a flag marking lines with a nontrivial stabiliser in that subgroup."""
    from .orbits import translate_ids

    n_lines = space.num_lines
    step = translate_ids(space, np.arange(n_lines), shift)
    orbit = np.full(n_lines, -1, dtype=np.int64)
    fixed = np.zeros(n_lines, dtype=bool)
    g = space.v // shift
    k = 0
    for start in range(n_lines):
        if orbit[start] >= 0:
            continue
        members = [start]
        nxt = int(step[start])
        while nxt != start:
            members.append(nxt)
            nxt = int(step[nxt])
        orbit[members] = k
        fixed[members] = len(members) < g
        k += 1
    return orbit, fixed


def search_parallelism(space: ProjectiveSpace, group_order: int | None = None,
                       budget: int | None = None, seed: int | None = None,
                       restarts: int = 0) -> SearchOutcome:
    """Partition the lines into spreads by depth-first search.

    Each level takes the least uncovered line and tries the spreads through
    it that use only uncovered lines.  With ``group_order`` g (a divisor of
    v, Singer model) the parallelism is required to be invariant under the
    translation subgroup H of order g: a spread is built from at most one
    line per H-orbit of lines, so its g translates are automatically
    line-disjoint and are placed together.  Lines with a nontrivial
    stabiliser in H must form the short-orbit spread, which is placed first.

    ``restarts`` > 0 splits the budget into that many equal slices, each
    a fresh run with a derived seed (restart-on-failure).
    """
    if space.n % 2 == 0:
        raise ValueError("spreads exist only for odd n")
    if restarts:
        per = None if budget is None else max(1, budget // restarts)
        total = 0
        base = 0 if seed is None else seed
        last = None
        for r in range(restarts):
            last = search_parallelism(space, group_order, per, base * 1000 + r + 1)
            total += last.nodes
            if last.status != "exhausted":
                last.nodes = total
                return last
        last.nodes = total
        return last

    shift = None
    if group_order not in (None, 1):
        if space.model != "singer":
            raise ValueError("prescribed translations need the Singer model")
        if space.v % group_order:
            raise ValueError(f"group order {group_order} does not divide v={space.v}")
        shift = space.v // group_order
    from .orbits import translate_ids

    masks = _line_masks(space)
    cands = [list(map(int, row)) for row in space.point_lines]
    rng = random.Random(seed) if seed is not None else None
    if rng is not None:
        for c in cands:
            rng.shuffle(c)
    full = (1 << space.v) - 1
    free = np.ones(space.num_lines, dtype=bool)
    result: list[list[int]] = []
    nodes = 0

    line_orbit = None
    orbit_used: list[bool] = []
    if shift is not None:
        line_orbit, fixed = _subgroup_orbits(space, shift)
        orbit_used = [False] * (int(line_orbit.max()) + 1)
        if fixed.any():
            part = orbit_partition(space)
            short = sorted(int(x) for x in part.short[0]) if part.short else []
            if sorted(np.flatnonzero(fixed).tolist()) != short:
                raise ValueError(f"group order {group_order} fixes lines outside the short orbit")
            free[short] = False
            result.append(short)

    def spreads_through(first: int) -> Iterator[list[int]]:
        chosen = [first]
        if line_orbit is not None:
            orbit_used[line_orbit[first]] = True

        def ok(l: int, cov: int) -> bool:
            if not free[l] or masks[l] & cov:
                return False
            return line_orbit is None or not orbit_used[line_orbit[l]]

        def rec(cov: int) -> Iterator[list[int]]:
            nonlocal nodes
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(nodes)
            if cov == full:
                yield list(chosen)
                return
            best = None
            rest = ~cov & full
            while rest:
                low = rest & -rest
                p = low.bit_length() - 1
                rest ^= low
                opts = [l for l in cands[p] if ok(l, cov)]
                if best is None or len(opts) < len(best):
                    best = opts
                    if len(best) <= 1:
                        break
            for lid in best:
                chosen.append(lid)
                if line_orbit is not None:
                    orbit_used[line_orbit[lid]] = True
                yield from rec(cov | masks[lid])
                if line_orbit is not None:
                    orbit_used[line_orbit[lid]] = False
                chosen.pop()

        try:
            yield from rec(masks[first])
        finally:
            if line_orbit is not None:
                orbit_used[line_orbit[first]] = False

    def orbit_of_spread(sp: list[int]) -> list[list[int]]:
        if shift is None:
            return [sp]
        cur = np.array(sp)
        members = [sp]
        for _ in range(1, space.v // shift):
            cur = translate_ids(space, cur, shift)
            members.append([int(x) for x in cur])
        return members

    def rec_outer() -> bool:
        remaining = np.flatnonzero(free)
        if len(remaining) == 0:
            return True
        first = int(remaining[0])
        for sp in spreads_through(first):
            orbit = orbit_of_spread(sp)
            for m in orbit:
                free[m] = False
                result.append(m)
            if rec_outer():
                return True
            for m in orbit:
                free[m] = True
                result.pop()
        return False

    try:
        ok = rec_outer()
    except BudgetExceeded:
        return SearchOutcome("exhausted", None, nodes, frontier=[sorted(s) for s in result])
    if ok:
        return SearchOutcome("found", [sorted(s) for s in result], nodes)
    return SearchOutcome("infeasible", None, nodes)
