"""Single-edit mutations of verified structures, with a naive ground truth
for each edit so detection is scored against real violations only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pgcolor.coloring import Coloring, verify_coloring
from pgcolor.property_e import PropertyECertificate, verify_property_e
from pgcolor.spreads import verify_parallelism


@dataclass
class Tally:
    trials: int = 0
    invalid: int = 0   # mutations the naive oracle calls invalid
    caught: int = 0    # invalid mutations the verifier rejected
    false_alarms: int = 0

    def add(self, truly_invalid: bool, rejected: bool) -> None:
        self.trials += 1
        self.invalid += truly_invalid
        self.caught += truly_invalid and rejected
        self.false_alarms += rejected and not truly_invalid

    @property
    def rate(self) -> float:
        return self.caught / self.invalid if self.invalid else 1.0

    def __str__(self) -> str:
        return f"{self.caught}/{self.invalid} caught over {self.trials} mutations, {self.false_alarms} false alarms"


def clashes_at_line(col: Coloring, lid: int) -> bool:
    """Naive check: does another line through a point of ``lid`` share its color?"""
    s = col.space
    c = col.colors[lid]
    for p in s.line_points[lid]:
        for other in s.point_lines[p]:
            if other != lid and col.colors[other] == c:
                return True
    return False


def recolor_trial(col: Coloring, rng: np.random.Generator, tally: Tally) -> None:
    lid = int(rng.integers(col.space.num_lines))
    old = int(col.colors[lid])
    new = int(rng.integers(col.palette - 1))
    new += new >= old
    col.colors[lid] = new
    try:
        tally.add(clashes_at_line(col, lid), not verify_coloring(col.space, col))
    finally:
        col.colors[lid] = old


def spread_deletion_trial(space, spreads, rng: np.random.Generator, tally: Tally) -> None:
    k = int(rng.integers(len(spreads)))
    rest = spreads[:k] + spreads[k + 1:]
    covered = np.zeros(space.num_lines, dtype=int)
    for sp in rest:
        np.add.at(covered, sp, 1)
    tally.add(bool((covered != 1).any()), not verify_parallelism(space, rest))


def member_deletion_trial(cert: PropertyECertificate, rng: np.random.Generator, tally: Tally) -> None:
    k = int(rng.integers(len(cert.S)))
    S = cert.S[:k] + cert.S[k + 1:]
    q = cert.q
    counts = np.zeros(cert.space.num_lines, dtype=int)
    for m in S:
        np.add.at(counts, m, 1)
    want = np.full(cert.space.num_lines, q)
    want[cert.P] = q + 1
    tally.add(bool((counts != want).any()), not verify_property_e(PropertyECertificate(cert.space, cert.P, S)))
