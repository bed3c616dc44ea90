"""Line orbits of the Singer cycle x -> beta*x (point label i -> i+1 mod v)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import ProjectiveSpace


class ModelError(ValueError):
    pass


def _require_singer(space: ProjectiveSpace) -> None:
    if space.model != "singer":
        raise ModelError("translations are only defined on the Singer model")


def translate_line(line, t: int, v: int) -> tuple[int, ...]:
    """Shift every point label of ``line`` by ``t`` modulo ``v``."""
    return tuple(sorted((int(p) + t) % v for p in line))


def translate_ids(space: ProjectiveSpace, line_ids, t: int) -> np.ndarray:
    """Line ids of the translates of ``line_ids`` by ``t``."""
    _require_singer(space)
    lp = space.line_points[np.asarray(line_ids)]
    v = space.v
    return space.pair_line[(lp[..., 0] + t) % v, (lp[..., 1] + t) % v]


@dataclass
class OrbitPartition:
    v: int
    short: list[np.ndarray]
    full: list[np.ndarray]

    @property
    def representatives(self) -> list[int]:
        return [int(o[0]) for o in self.short + self.full]

    def orbit_of(self) -> np.ndarray:
        """Line id -> orbit index (short orbits first)."""
        size = sum(len(o) for o in self.short + self.full)
        out = np.empty(size, dtype=np.int64)
        for k, o in enumerate(self.short + self.full):
            out[o] = k
        return out

    def to_json(self) -> dict:
        return {"short": [o.tolist() for o in self.short], "full": [o.tolist() for o in self.full]}


def orbit_partition(space: ProjectiveSpace) -> OrbitPartition:
    """Partition the lines into orbits under the Singer cycle.

    Each orbit is listed starting from its least line id (the lexicographically
    least line), followed by its translates by 1, 2, ... in order.
    """
    _require_singer(space)
    n_lines = len(space.line_points)
    step = translate_ids(space, np.arange(n_lines), 1)
    seen = np.zeros(n_lines, dtype=bool)
    short, full = [], []
    for start in range(n_lines):
        if seen[start]:
            continue
        orbit = [start]
        nxt = int(step[start])
        while nxt != start:
            orbit.append(nxt)
            nxt = int(step[nxt])
        arr = np.array(orbit, dtype=np.int64)
        seen[arr] = True
        (full if len(arr) == space.v else short).append(arr)
    return OrbitPartition(space.v, short, full)


def expected_orbit_counts(n: int, q: int) -> tuple[int, int]:
    """(number of short orbits, number of full orbits) for PG(n,q)."""
    if n % 2:
        return 1, (q ** n - q) // (q * q - 1)
    return 0, (q ** n - 1) // (q * q - 1)
