import random
from typing import List, Tuple

import pytest

from core.configs.solver import SolverConfig


def random_lists(rng: random.Random, total: int, n: int) -> Tuple[List[int], List[int]]:
    """Random Berge cycle and path lengths summing to total (cycles in [2, n], paths in [1, n-1])."""
    cycles, paths = [], []
    left = total
    while left:
        if left >= 2 and rng.random() < 0.5:
            m = rng.randint(2, min(n, left))
            cycles.append(m)
        else:
            m = rng.randint(1, min(n - 1, left))
            paths.append(m)
        left -= m
    return cycles, paths


@pytest.fixture
def config() -> SolverConfig:
    return SolverConfig(seed=7)
