from __future__ import annotations

from functools import lru_cache

import pytest

from pgcolor.construction import LevelInputs, recursive_color
from pgcolor.property_e import load_dataset
from pgcolor.space import build_space


@lru_cache(maxsize=None)
def space(n: int, q: int, model: str = "singer"):
    return build_space(n, q, model)


@lru_cache(maxsize=None)
def dataset(q: int):
    return load_dataset(q)


@lru_cache(maxsize=None)
def recursion(n: int, q: int):
    """Odd-n recursion results, each level built on the previous one."""
    if n == 5:
        return recursive_color(5, q, dataset(q))
    lower = recursion(n - 2, q)
    return recursive_color(n, q, dataset(q), base=LevelInputs(lower.coloring, lower.property_r))


@pytest.fixture(scope="session")
def pg52():
    return recursion(5, 2)


@pytest.fixture(scope="session")
def pg53():
    return recursion(5, 3)
