import logging
import random

import pytest

from core.configs.solver import SolverConfig
from core.graphs.admissibility import (
    PackingInstance,
    f,
    is_admissible,
    packing_feasible,
    path_packing_feasible,
)
from core.graphs.graph_decomp import (
    GraphDecomposition,
    brute_force_packing_exists,
    cycle_decomposition,
    cycle_packing,
    decomposition_from_walks,
    drop_walks,
    extension_for_packing,
    packing_count_bound,
    path_packing,
    verify_graph_decomposition,
)
from core.graphs.multigraph import (
    Multigraph,
    WalkKind,
    complete_multigraph,
    near_factor_I,
    subtract,
)
from core.utils.errors import InfeasibleInput, InstanceTooLarge
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)


def _cycle_host(lam, n):
    return subtract(complete_multigraph(lam, n), near_factor_I(lam, n))


@pytest.mark.parametrize(
    "lam, n, M",
    [(1, 5, [5, 5]), (1, 5, [3, 3, 4]), (1, 6, [3, 3, 3, 3]), (2, 4, [2] * 6), (2, 3, [3, 3])],
)
def test_cycle_decomposition(config, lam, n, M):
    d = cycle_decomposition(lam, n, M, config)
    assert d.is_decomposition
    assert verify_graph_decomposition(_cycle_host(lam, n), d, M, WalkKind.CYCLE) == []


def test_cycle_decomposition_rejects_inadmissible(config):
    with pytest.raises(InfeasibleInput):
        cycle_decomposition(1, 5, [3, 3, 3], config)


def test_cycle_decomposition_of_empty_host(config):
    d = cycle_decomposition(0, 5, [], config)
    assert d.walks == []
    assert d.host.edge_count() == 0
    with pytest.raises(InfeasibleInput):
        cycle_decomposition(0, 5, [3], config)


def test_cycle_packing_leave(config):
    assert extension_for_packing(1, 5, [3, 3]) == [4]
    d = cycle_packing(1, 5, [3, 3], config)
    assert len(d.leave) == 4
    assert sorted(d.lengths()) == [3, 3]
    assert verify_graph_decomposition(complete_multigraph(1, 5), d, [3, 3], WalkKind.CYCLE) == []


def test_extension_keeps_hamilton_lists_direct():
    assert extension_for_packing(2, 38, [38] * 18) == [38] + [2] * 342
    assert extension_for_packing(2, 38, [38] * 18, prefer_digons=True) == [2] * 361
    assert extension_for_packing(2, 38, [38] * 17, prefer_digons=True) == [38] + [2] * 361
    # lists with other lengths keep the default order
    assert extension_for_packing(2, 5, [4, 3], prefer_digons=True) == [3] + [2] * 5


def test_cycle_packing_infeasible(config):
    with pytest.raises(InfeasibleInput):
        cycle_packing(1, 5, [3, 3, 3], config)


def test_path_packing(config):
    d = path_packing(1, 4, [3, 3], config)
    assert d.is_decomposition
    assert verify_graph_decomposition(complete_multigraph(1, 4), d, [3, 3], WalkKind.PATH) == []

    d = path_packing(1, 5, [4, 4], config)
    assert len(d.leave) == 2
    assert verify_graph_decomposition(complete_multigraph(1, 5), d, [4, 4], WalkKind.PATH) == []

    with pytest.raises(InfeasibleInput):
        path_packing(1, 4, [4], config)


def test_verify_graph_decomposition_flags_problems(config):
    d = cycle_decomposition(1, 5, [5, 5], config)
    host = complete_multigraph(1, 5)
    assert any("length multiset" in v for v in verify_graph_decomposition(host, d, [5, 3, 2], WalkKind.CYCLE))
    half = GraphDecomposition(host, d.walks[:1], [])
    assert any("coverage" in v for v in verify_graph_decomposition(host, half, [5], WalkKind.CYCLE))
    assert any("expected a path" in v for v in verify_graph_decomposition(host, d, [5, 5], WalkKind.PATH))


def test_drop_walks(config):
    d = cycle_decomposition(1, 5, [3, 3, 4], config)
    dropped = drop_walks(d, [4])
    assert sorted(dropped.lengths()) == [3, 3]
    assert len(dropped.leave) == 4
    with pytest.raises(InfeasibleInput):
        drop_walks(d, [5])


def test_decomposition_from_walks():
    host = Multigraph(3, {(1, 2): 2, (1, 3): 1, (2, 3): 1})
    d = decomposition_from_walks(host, [(WalkKind.CYCLE, (1, 2)), (WalkKind.PATH, (2, 3))])
    assert d.walks[0].edges == ((1, 2, 0), (1, 2, 1))
    assert d.leave == [(1, 3, 0)]
    with pytest.raises(InfeasibleInput):
        decomposition_from_walks(host, [(WalkKind.CYCLE, (1, 3))])


def test_merged_and_compacted(config):
    d1 = cycle_decomposition(1, 5, [5, 5], config)
    d2 = cycle_packing(1, 5, [3, 3], config).compacted()
    assert d2.host.edge_count() == 6
    both = d1.merged(d2)
    assert both.host.edge_count() == 16
    assert verify_graph_decomposition(both.host, both, [5, 5, 3, 3], WalkKind.CYCLE) == []
    again = GraphDecomposition.from_model(both.to_model())
    assert again.host == both.host
    assert [w.edges for w in again.walks] == [w.edges for w in both.walks]


def test_oracle_examples():
    k5 = complete_multigraph(1, 5)
    assert brute_force_packing_exists(k5, [3, 3], WalkKind.CYCLE)
    assert not brute_force_packing_exists(k5, [3, 3, 3], WalkKind.CYCLE)
    assert brute_force_packing_exists(complete_multigraph(1, 3), [3], WalkKind.CYCLE)
    assert not brute_force_packing_exists(k5, [1], WalkKind.CYCLE)
    assert brute_force_packing_exists(k5, [], WalkKind.PATH)


def test_oracle_size_cap():
    with pytest.raises(InstanceTooLarge):
        brute_force_packing_exists(complete_multigraph(1, 9), [3], WalkKind.CYCLE)


def _lists(budget, lo, hi):
    """Every non-increasing list with parts in [lo, hi] and sum at most budget."""
    yield []
    for part in range(min(hi, budget), lo - 1, -1):
        for rest in _lists(budget - part, lo, part):
            yield [part] + rest


def _oracle_sweep(lam, n):
    cycle_host = _cycle_host(lam, n)
    path_host = complete_multigraph(lam, n)
    for M in _lists(f(lam, n), 2, n):
        expected = packing_feasible(PackingInstance(lam, n, M))
        assert brute_force_packing_exists(cycle_host, M, WalkKind.CYCLE) == expected, (lam, n, M)
    for P in _lists(lam * (n * (n - 1) // 2), 1, n - 1):
        expected = path_packing_feasible(lam, n, P)
        assert brute_force_packing_exists(path_host, P, WalkKind.PATH) == expected, (lam, n, P)


def test_list_enumeration():
    assert list(_lists(4, 2, 3)) == [[], [3], [2], [2, 2]]


@pytest.mark.parametrize("lam, n", [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5)])
def test_packing_conditions_agree_with_oracle(lam, n):
    _oracle_sweep(lam, n)


@pytest.mark.slow
@pytest.mark.parametrize("lam, n", [(2, 5), (1, 6), (2, 6)])
def test_packing_conditions_agree_with_oracle_large(lam, n):
    _oracle_sweep(lam, n)


def _random_cycle(rng, w, n):
    """A random cycle of the multiplicity matrix w, or None."""
    starts = [v for v in range(1, n + 1) if any(w[v][u] for u in range(1, n + 1))]
    if not starts:
        return None
    x = rng.choice(starts)
    path = [x]
    while True:
        u = path[-1]
        back = len(path) >= 3 and w[u][x] > 0 or len(path) == 2 and w[u][x] >= 2
        if back and rng.random() < 0.5:
            return tuple(path)
        nxt = [v for v in range(1, n + 1) if w[u][v] > 0 and v not in path]
        if not nxt:
            return tuple(path) if back else None
        path.append(rng.choice(nxt))


def test_packing_count_bound_holds_for_random_packings():
    rng = random.Random(5)
    for _ in range(1000):
        n = rng.randint(2, 8)
        g = Multigraph(n, {(x, y): 2 * rng.randint(0, 2) for x in range(1, n + 1) for y in range(x + 1, n + 1)})
        if g.edge_count() == 0:
            continue
        w = [[g.m(x, y) if x != y else 0 for y in range(n + 1)] for x in range(n + 1)]
        cycles = []
        for _ in range(rng.randint(1, 12)):
            cycle = _random_cycle(rng, w, n)
            if cycle is None:
                continue
            steps = list(zip(cycle, cycle[1:] + cycle[:1]))
            for a, b in steps:
                w[a][b] -= 1
                w[b][a] -= 1
            cycles.append((WalkKind.CYCLE, cycle))
        if not cycles:
            continue
        d = decomposition_from_walks(g, cycles)
        for c0 in d.walks:
            assert len(d.walks) <= packing_count_bound(g, d.walks, c0)


def _partitions(total, hi, lo=2):
    if total == 0:
        yield []
        return
    for part in range(min(hi, total), lo - 1, -1):
        for rest in _partitions(total - part, part, lo):
            yield [part] + rest


def _decompose_every_admissible_list(lam, n):
    config = SolverConfig(seed=lam * 100 + n)
    host = _cycle_host(lam, n)
    count = 0
    for M in _partitions(f(lam, n), n):
        if not is_admissible(lam, n, M):
            continue
        d = cycle_decomposition(lam, n, M, config)
        assert verify_graph_decomposition(host, d, M, WalkKind.CYCLE) == [], (lam, n, M)
        count += 1
    assert count > 0


@pytest.mark.parametrize("lam, n", [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)])
def test_every_admissible_list_decomposes(lam, n):
    _decompose_every_admissible_list(lam, n)


@pytest.mark.slow
@pytest.mark.parametrize("lam, n", [(1, 6), (2, 6), (1, 7), (2, 7), (1, 8), (1, 9)])
def test_every_admissible_list_decomposes_large(lam, n):
    _decompose_every_admissible_list(lam, n)


def _random_path_instances(count, max_n, max_lam, seed):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(3, max_n)
        lam = rng.randint(1, max_lam)
        room = int(0.8 * lam * (n * (n - 1) // 2))
        M = []
        while True:
            m = rng.randint(1, n - 1)
            if sum(M) + m > room:
                break
            M.append(m)
        yield lam, n, M


def test_path_packing_random_instances(config):
    for lam, n, M in _random_path_instances(40, 8, 2, seed=12):
        d = path_packing(lam, n, M, config)
        assert verify_graph_decomposition(complete_multigraph(lam, n), d, M, WalkKind.PATH) == []


@pytest.mark.slow
def test_path_packing_random_instances_large(config):
    for lam, n, M in _random_path_instances(500, 12, 3, seed=13):
        d = path_packing(lam, n, M, config)
        assert verify_graph_decomposition(complete_multigraph(lam, n), d, M, WalkKind.PATH) == []


def test_heuristic_engine_is_deterministic():
    M = [13] * 10 + [7] * 6
    runs = [path_packing(2, 14, M, SolverConfig(seed=99)) for _ in range(2)]
    assert [w.vertices for w in runs[0].walks] == [w.vertices for w in runs[1].walks]
    assert verify_graph_decomposition(complete_multigraph(2, 14), runs[0], M, WalkKind.PATH) == []
