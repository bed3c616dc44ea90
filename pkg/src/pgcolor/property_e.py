"""Property E families of PG(3,q): builtin datasets, translation expansion
and the three-condition verifier.

A certificate is a special spread P and a multiset S of (q^4-1)/(q-1)
spreads such that every line of P lies in q+1 members of S, every other line
in q members, and no member contains two lines of P.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from .orbits import orbit_partition, translate_ids
from .space import ProjectiveSpace, build_space, gaussian_binomial
from .spreads import as_line_ids, short_orbit_base_line, verify_spread
from .verdict import Verdict

SUPPORTED_Q = (2, 3, 4, 8)


class DatasetError(ValueError):
    pass


@dataclass
class PropertyECertificate:
    """P and the multiset S, both as line ids of a Singer-model PG(3,q).

    Members keep the order in which they were given (and, within a member,
    the order of its lines), which is what the printed tables use.
    """

    space: ProjectiveSpace
    P: list[int]
    S: list[list[int]]
    labels: list[tuple[int, int]] = field(default_factory=list)

    @property
    def q(self) -> int:
        return self.space.q

    def member_labels(self) -> list[tuple[int, int]]:
        """(i, j) per member: i is the position in P of the member's P-line,
        j its rank among the members through that line."""
        if self.labels:
            return list(self.labels)
        pos = {l: i for i, l in enumerate(self.P)}
        seen = [0] * len(self.P)
        out = []
        for m in self.S:
            hits = [pos[l] for l in m if l in pos]
            if len(hits) != 1:
                raise ValueError("member does not contain exactly one line of P")
            out.append((hits[0], seen[hits[0]]))
            seen[hits[0]] += 1
        return out

    def to_json(self) -> dict:
        lines = self.space.lines_of
        return {"q": self.q, "P": [list(l) for l in lines(self.P)],
                "S": [[list(l) for l in lines(m)] for m in self.S]}


def family_size(q: int) -> int:
    return (q ** 4 - 1) // (q - 1)


def verify_property_e(cert: PropertyECertificate) -> Verdict:
    """Check P, the multiset size and conditions (1)-(3), counting with
    multiplicity.  Details list every violating line or member."""
    space, q = cert.space, cert.q
    if space.n != 3:
        return Verdict.fail(f"property E lives in PG(3,q), got {space!r}")
    vp = verify_spread(space, cert.P)
    if not vp:
        return Verdict.fail(f"P is not a spread: {vp.message}")
    bad_members = []
    for idx, m in enumerate(cert.S):
        vm = verify_spread(space, m)
        if not vm:
            bad_members.append((idx, vm.message))
    if bad_members:
        return Verdict.fail(f"{len(bad_members)} members are not spreads (first #{bad_members[0][0]}: "
                            f"{bad_members[0][1]})", members=bad_members)

    counts = np.zeros(space.num_lines, dtype=np.int64)
    for m in cert.S:
        np.add.at(counts, np.asarray(m), 1)
    in_p = np.zeros(space.num_lines, dtype=bool)
    in_p[np.asarray(cert.P)] = True
    c1 = np.flatnonzero(in_p & (counts != q + 1))
    c2 = np.flatnonzero(~in_p & (counts != q))
    c3 = [idx for idx, m in enumerate(cert.S) if int(in_p[np.asarray(m)].sum()) > 1]
    size_ok = len(cert.S) == family_size(q)
    # double count of incidences between S and the lines of PG(3,q)
    lines = gaussian_binomial(4, 2, q)
    ident = family_size(q) * (q * q + 1) == (q * q + 1) * (q + 1) + (lines - q * q - 1) * q
    details = {
        "members": len(cert.S),
        "condition1": [(int(l), int(counts[l])) for l in c1],
        "condition2": [(int(l), int(counts[l])) for l in c2],
        "condition3": c3,
        "size_ok": size_ok,
        "double_count_ok": ident and int(counts.sum()) == (q * q + 1) * len(cert.S),
    }
    problems = []
    if not size_ok:
        problems.append(f"|S| = {len(cert.S)}, expected {family_size(q)}")
    if len(c1):
        problems.append(f"condition (1) fails on {len(c1)} lines of P")
    if len(c2):
        problems.append(f"condition (2) fails on {len(c2)} lines")
    if c3:
        problems.append(f"condition (3) fails on {len(c3)} members")
    if not details["double_count_ok"]:
        problems.append("incidence double count mismatch")
    if problems:
        return Verdict(False, "; ".join(problems), details)
    return Verdict(True, f"{len(cert.S)} spreads, conditions (1)(2)(3) hold", details)


def _check_profile(space: ProjectiveSpace, base: Sequence[int]) -> None:
    part = orbit_partition(space)
    of = part.orbit_of()
    q = space.q
    got = np.bincount(of[np.asarray(base)], minlength=1 + len(part.full))
    want = [1] + [q] * len(part.full)
    if short_orbit_base_line(space) not in base or got.tolist() != want:
        raise ValueError(f"base spread has orbit profile {got.tolist()}, need {want} "
                         "including the short-orbit line through 0")


def expand_base_spread(space: ProjectiveSpace, base) -> PropertyECertificate:
    """Translate ``base`` by j(q^2+1)+i for 0 <= i <= q^2, 0 <= j <= q.

    Members are ordered by i, then j; member (i, j) contains the i-th
    line of P, the short orbit listed from the line through 0.
    """
    q = space.q
    ids = [int(x) for x in as_line_ids(space, base)]
    if not verify_spread(space, ids):
        raise ValueError("base is not a spread")
    _check_profile(space, ids)
    l0 = short_orbit_base_line(space)
    P = [int(translate_ids(space, [l0], i)[0]) for i in range(q * q + 1)]
    S, labels = [], []
    for i in range(q * q + 1):
        for j in range(q + 1):
            S.append([int(x) for x in translate_ids(space, ids, j * (q * q + 1) + i)])
            labels.append((i, j))
    return PropertyECertificate(space, P, S, labels)


def render_member(space: ProjectiveSpace, member: Sequence[int]) -> str:
    return "{" + ",".join("{" + ",".join(map(str, pts)) + "}" for pts in space.lines_of(member)) + "}"


def render_table(cert: PropertyECertificate) -> list[str]:
    """One ``P_i^j={{...},...}`` row per member, in member order."""
    return [f"P_{i}^{j}={render_member(cert.space, m)}" for (i, j), m in zip(cert.member_labels(), cert.S)]


# -- builtin datasets ---------------------------------------------------------------

def dataset_text(name: str) -> str:
    return resources.files("pgcolor").joinpath("data").joinpath(name).read_text()


def dataset_hash(name: str) -> str:
    return hashlib.sha256(resources.files("pgcolor").joinpath("data").joinpath(name).read_bytes()).hexdigest()


def _parse(text: str) -> list[tuple[str, list[str]]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            key, *rest = line.split()
            out.append((key, rest))
    return out


def _ints(tokens: Sequence[str]) -> list[int]:
    return [int(t) for t in tokens]


def load_dataset(q: int) -> PropertyECertificate:
    """The property E family for q in {2, 3, 4, 8} from the bundled data."""
    if q not in SUPPORTED_Q:
        raise DatasetError(f"no builtin property E dataset for q={q}; have {SUPPORTED_Q}")
    rows = _parse(dataset_text(f"property_e_q{q}.txt"))
    head = dict((k, v) for k, v in rows if k in ("q", "poly"))
    if int(head["q"][0]) != q:
        raise DatasetError("dataset header does not match q")
    space = build_space(3, q, "singer", tuple(_ints(head["poly"])))
    v = space.v
    if q != 3:
        base: list[tuple[int, ...]] = []
        for key, toks in rows:
            if key == "short":
                base.append(tuple(_ints(toks)))
            elif key == "orbit":
                bar = toks.index("|")
                block, shifts = _ints(toks[:bar]), _ints(toks[bar + 1:])
                base.extend(tuple(sorted((b + s) % v for b in block)) for s in shifts)
        return expand_base_spread(space, base)

    named: dict[int, tuple[int, ...]] = {}
    special: list[int] = []
    members: list[list[int]] = []
    for key, toks in rows:
        if key == "lines":
            first, count, *block = _ints(toks)
            for i in range(count):
                named[first + i] = tuple(sorted((b + i) % v for b in block))
        elif key == "special":
            special = _ints(toks)
        elif key == "spread":
            members.append(_ints(toks))
    try:
        to_id = {k: space.line_id(pts) for k, pts in named.items()}
        P = [to_id[k] for k in special]
        S = [[to_id[k] for k in m] for m in members]
    except KeyError as exc:
        raise DatasetError(f"dataset names an unknown line: {exc}") from None
    return PropertyECertificate(space, P, S)


def load_golden_table(q: int = 2) -> list[str]:
    if q != 2:
        raise DatasetError("a printed table ships only for q=2")
    return [l.strip() for l in dataset_text("property_e_q2_table.txt").splitlines() if l.strip()]


def transport(cert: PropertyECertificate, dst: ProjectiveSpace) -> tuple[list[int], list[list[int]]]:
    """Map P and S into ``dst`` (a PG(3,q) in any model) by identity coordinates."""
    from .space import linear_isomorphism

    src = cert.space
    pm = linear_isomorphism(src, dst, [[int(i == k) for i in range(4)] for k in range(4)])
    P = [int(x) for x in pm.map_lines(cert.P)]
    S = [[int(x) for x in pm.map_lines(m)] for m in cert.S]
    return P, S
