import logging
from collections import Counter

import pytest

from core.configs.solver import SolverConfig
from core.graphs.admissibility import f, is_admissible
from core.graphs.graph_decomp import cycle_decomposition, decomposition_from_walks, verify_graph_decomposition
from core.graphs.layers import (
    hamilton_cycles,
    hamilton_digon_cycles,
    layer_split,
    two_layer_hamilton,
    walecki,
    zigzag,
)
from core.graphs.multigraph import WalkKind, complete_multigraph, near_factor_I, pair, subtract
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)


def _pair_counts(cycles):
    counts = Counter()
    for c in cycles:
        counts.update(pair(x, y) for x, y in zip(c, c[1:] + c[:1]))
    return counts


def _host(lam, n):
    return subtract(complete_multigraph(lam, n), near_factor_I(lam, n))


def test_zigzag_paths_cover_K_2k():
    k = 4
    paths = [zigzag(i, k) for i in range(k)]
    assert all(sorted(p) == list(range(2 * k)) for p in paths)
    edges = [frozenset(e) for p in paths for e in zip(p, p[1:])]
    assert len(edges) == len(set(edges)) == k * (2 * k - 1)


@pytest.mark.parametrize("n", range(3, 13))
def test_walecki_leaves_a_perfect_matching(n):
    cycles, F = walecki(n)
    assert all(sorted(c) == list(range(1, n + 1)) for c in cycles)
    counts = _pair_counts(cycles)
    assert max(counts.values()) == 1
    assert sum(counts.values()) + len(F) == n * (n - 1) // 2
    assert not set(counts) & set(F)
    assert sorted(v for e in F for v in e) == (list(range(1, n + 1)) if n % 2 == 0 else [])


def test_walecki_four_vertices():
    assert walecki(4) == ([(3, 1, 4, 2)], [(3, 4), (1, 2)])


@pytest.mark.parametrize("n", range(3, 11))
def test_two_layer_hamilton(n):
    cycles = two_layer_hamilton(n)
    assert len(cycles) == n - 1
    assert all(len(set(c)) == n for c in cycles)
    assert _pair_counts(cycles) == Counter(complete_multigraph(2, n).mult)


@pytest.mark.parametrize("lam", [1, 2, 3, 4])
@pytest.mark.parametrize("n", range(3, 11))
def test_hamilton_cycles_decompose_the_host(lam, n):
    cycles = hamilton_cycles(lam, n)
    assert len(cycles) * n == f(lam, n)
    d = decomposition_from_walks(_host(lam, n), [(WalkKind.CYCLE, c) for c in cycles])
    assert verify_graph_decomposition(_host(lam, n), d, [n] * len(cycles), WalkKind.CYCLE) == []


@pytest.mark.parametrize("lam, n, h", [(2, 5, 2), (2, 6, 4), (4, 6, 5), (4, 7, 6), (2, 9, 0), (6, 8, 13)])
def test_hamilton_digon_cycles(lam, n, h):
    cycles = hamilton_digon_cycles(lam, n, h)
    M = [n] * h + [2] * ((f(lam, n) - h * n) // 2)
    assert sorted(len(c) for c in cycles) == sorted(M)
    d = decomposition_from_walks(_host(lam, n), [(WalkKind.CYCLE, c) for c in cycles])
    assert verify_graph_decomposition(_host(lam, n), d, M, WalkKind.CYCLE) == []


def test_hamilton_digon_cycles_out_of_reach():
    assert hamilton_digon_cycles(3, 5, 2) is None
    # an odd count needs a whole 2K_n layer of Hamilton cycles
    assert hamilton_digon_cycles(2, 6, 3) is None
    assert hamilton_digon_cycles(2, 5, 6) is None


def test_layer_split():
    M = [7, 7, 7, 6, 6, 5, 5, 4, 4, 3, 3, 2, 2, 2]
    assert layer_split(3, 7, M) == [(1, [7, 7, 7]), (2, [6, 6, 5, 5, 4, 4, 3, 3, 2, 2, 2])]
    M = [6] * 9 + [5, 4, 3] + [2] * 3
    split = layer_split(5, 6, M)
    assert split == [(1, [6, 6]), (2, [6, 6, 6, 6, 2, 2, 2]), (2, [6, 6, 6, 5, 4, 3])]
    assert all(is_admissible(layer, 6, sub) for layer, sub in split)


def test_layered_decomposition(config):
    M = [5, 5, 4, 4, 3, 3, 2, 2, 2]
    assert layer_split(3, 5, M) == [(1, [5, 5]), (2, [4, 4, 3, 3, 2, 2, 2])]
    d = cycle_decomposition(3, 5, M, config)
    assert verify_graph_decomposition(_host(3, 5), d, M, WalkKind.CYCLE) == []


def test_unsplittable_list_still_decomposes(config):
    M = [3, 3, 3, 3, 2, 2]
    assert is_admissible(3, 4, M)
    assert layer_split(3, 4, M) is None
    d = cycle_decomposition(3, 4, M, config)
    assert verify_graph_decomposition(_host(3, 4), d, M, WalkKind.CYCLE) == []


def test_large_hamilton_hosts_skip_the_search():
    config = SolverConfig(seed=3, max_restarts=1, node_budget=1)
    M = [38] * 203
    d = cycle_decomposition(11, 38, M, config)
    assert verify_graph_decomposition(_host(11, 38), d, M, WalkKind.CYCLE) == []
    M = [38] * 18 + [2] * 361
    d = cycle_decomposition(2, 38, M, config)
    assert verify_graph_decomposition(_host(2, 38), d, M, WalkKind.CYCLE) == []
